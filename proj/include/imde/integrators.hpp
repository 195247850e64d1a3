#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "imde/errors.hpp"
#include "imde/limit_field.hpp"
#include "imde/oscillatory.hpp"
#include "imde/profile.hpp"
#include "imde/trajectory.hpp"

namespace imde {

struct SolverConfig {
  Profile<double> profile = Profile<double>::centered(3, 1.0, 1.0);
  /// Memory parameter; std::nullopt selects the limit equation.
  std::optional<double> h;
  double T = 1.0;
  double dt = 1.0 / 256;
  Eigen::VectorXd xi0 = Eigen::VectorXd::Unit(3, 0);
  QuadratureSpec quad;
  SphereQuadSpec squad;
  /// Fixed-point tolerance; <= 0 selects 1e-10 (1 + |xi0|).
  double fp_tol = 0;
  int fp_max_iter = 50;

  int dimension() const { return profile.dimension(); }
  /// Number of steps: ceil(T / dt), so the grid ends at or just past T.
  std::size_t steps() const;
  double resolved_fp_tol() const;
};

/// Checks the invariants shared by both solvers; throws InputError.
void validate(const SolverConfig& config);

struct SolveResult {
  Trajectory trajectory;
  /// Right-hand side at each accepted node.
  std::vector<Eigen::VectorXd> field;
  /// Set when the limit solver stopped early near the singular point u = 0.
  bool truncated = false;
  std::string diagnostic;
  std::vector<std::string> warnings;
  int max_fixed_point_iterations = 0;
};

/// Raised when the corrector sweep does not settle; carries the history up to
/// the failing step.
class FixedPointError : public SolverError {
 public:
  FixedPointError(const std::string& what, SolveResult partial, std::size_t step, int iterations,
                  double residual)
      : SolverError(what),
        partial_(std::move(partial)),
        step_(step),
        iterations_(iterations),
        residual_(residual) {}

  const SolveResult& partial() const { return partial_; }
  std::size_t step() const { return step_; }
  int iterations() const { return iterations_; }
  double residual() const { return residual_; }

 private:
  SolveResult partial_;
  std::size_t step_;
  int iterations_;
  double residual_;
};

using LocalField = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
/// Right-hand side that reads the (possibly trial-extended) history at time t.
using HistoryField = std::function<Eigen::VectorXd(const Trajectory&, double)>;

/// Classical fourth-order Runge-Kutta for xi' = field(xi).  Stops and flags
/// the result when |xi| drops below `floor` or the field throws SingularInput.
SolveResult integrate_rk4(const LocalField& field, const Eigen::VectorXd& xi0, double dt,
                          std::size_t steps, double floor = 0);

/// Heun predictor-corrector with an inner fixed-point sweep: the trial value
/// is appended to the history and
///   xi_{k+1} <- xi_k + dt/2 (F(t_k) + F(t_{k+1}))
/// is iterated until the update falls below fp_tol.
SolveResult integrate_predictor_corrector(const HistoryField& field, const Eigen::VectorXd& xi0,
                                          double dt, std::size_t steps, double fp_tol,
                                          int fp_max_iter);

/// Limit equation xi' = F^(0)(xi).  Truncates (flagged) if |xi| < 1e-6 |xi0|.
SolveResult solve_limit(const SolverConfig& config);

/// Memory equation xi' = F^(h)(xi)(t).  Emits a warning when
/// dt (T + dt) > h^2 / (8 C_g), the window of the contraction argument.
SolveResult solve_memory(const SolverConfig& config);

}  // namespace imde
