#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "imde/integrators.hpp"
#include "imde/profile.hpp"
#include "imde/trajectory.hpp"

namespace imde {

struct BoundSample {
  double abscissa;  ///< t, h or a flattened grid index, per report
  double observed;
  double envelope;  ///< upper bound
  double lower = -std::numeric_limits<double>::infinity();
};

/// Observed quantities against a proof envelope.  violated is set iff some
/// sample has observed > envelope (1 + slack) or observed < lower (1 - slack).
struct BoundReport {
  std::string name;
  std::string abscissa_label = "t";
  std::vector<BoundSample> samples{};
  double slack = 0;
  bool applicable = true;
  bool violated = false;
  double max_ratio = 0;  ///< max observed / envelope
  std::string note{};

  void add(double abscissa, double observed, double envelope,
           double lower = -std::numeric_limits<double>::infinity());
  /// Recomputes violated and max_ratio from the samples.
  void finalize();
  bool passed() const { return !applicable || !violated; }
};

/// |xi_{k+1}| <= |xi_k| (1 + slack) at every step.
BoundReport check_decay(const Trajectory& trajectory,
                        double slack = 1e3 * std::numeric_limits<double>::epsilon());

/// True when |xi| strictly decreases from node to node.
bool strictly_decreasing_norm(const Trajectory& trajectory);

/// Forward-difference |xi'| against 2 C1_g.
BoundReport check_derivative_bound(const Trajectory& trajectory, const ConstantSet& constants,
                                   double slack = 0.05);

/// |avg_{[t - h r, t]} xi - xi(t)| against C1_g h r on a t_count x r_count
/// grid with t = T i / t_count and h r = t j / (r_count + 1).
BoundReport check_avg_control(const Trajectory& trajectory, double h, const ConstantSet& constants,
                              int t_count = 20, int r_count = 20);

struct FrozenLimitReport {
  BoundReport report;  ///< abscissa h; one block of samples per t
  /// Least-squares slope of log |F^(h) - F^(0)| against log h, per t.
  std::vector<double> slopes;
};

/// |F^(h)(u)(t) - F^(0)(u)| <= C3_g (h / t)^{d/2 - 1} on the grids.
FrozenLimitReport check_frozen_vs_limit(const Eigen::VectorXd& u, const std::vector<double>& t_grid,
                                        const std::vector<double>& h_grid,
                                        const Profile<double>& profile,
                                        const ConstantSet& constants,
                                        const QuadratureSpec& quad = {},
                                        const SphereQuadSpec& squad = {}, double slack = 0.05);

/// |F^(h)(xi^(h))(t) - F^(h)_frozen(xi_t)(t)| <= C2_g h^{nu - delta} at the
/// sample times, along a memory trajectory.
BoundReport check_memory_vs_frozen(const Trajectory& trajectory, double h,
                                   const std::vector<double>& times,
                                   const Profile<double>& profile, const ConstantSet& constants,
                                   const QuadratureSpec& quad = {}, double slack = 0.05);

struct LemmaReports {
  FrozenLimitReport frozen_vs_limit;
  BoundReport memory_vs_frozen;
};

/// Both comparison envelopes: frozen against limit at u over the (t, h)
/// grids, and memory against frozen along `memory` at h_memory.
LemmaReports check_lemma_envelopes(const Eigen::VectorXd& u, const std::vector<double>& t_grid,
                                   const std::vector<double>& h_grid,
                                   const Profile<double>& profile, const ConstantSet& constants,
                                   const Trajectory& memory, double h_memory,
                                   const std::vector<double>& memory_times,
                                   const QuadratureSpec& quad = {},
                                   const SphereQuadSpec& squad = {});

/// Extremes of |f|^2 over the closed ball B(0, radius).
struct SquaredExtremes {
  double min;
  double max;
};
SquaredExtremes f_squared_extremes(const Profile<double>& profile, double radius);

/// Solution of y' = -C y^{power} from y(0) = y0 sampled on `times`, by RK4
/// with steps no longer than max_step aligned to the sample times.
std::vector<double> comparison_ode(double C, double power, double y0,
                                   const std::vector<double>& times, double max_step);

/// Two-sided envelope for |xi_t|^2 on a limit trajectory from the comparison
/// ODEs with C = C_d min|f|^2 and C_d max|f|^2 on B(0, 2|xi_0|).
BoundReport sandwich_envelopes(const Trajectory& trajectory, const Profile<double>& profile,
                               const ConstantSet& constants, double oracle_step = 1e-5,
                               double slack = 1e-9);

struct LipschitzEstimate {
  double L = 0;
  double inner = 0;  ///< ring C(inner, outer) bracketing the trajectory
  double outer = 0;
};

/// Largest finite-difference Jacobian norm of F^(0) over a deterministic
/// sample of the ring bracketing the trajectory, widened by
/// margin * min |xi| on both sides.
LipschitzEstimate estimate_lipschitz(const Trajectory& trajectory, const Profile<double>& profile,
                                     const SphereQuadSpec& squad = {}, double margin = 0.25);

/// delta_1(h) = sqrt(h) + T (C2_g h^{nu - delta} + C3_g h^{(d-2)/4}).
double gronwall_delta(double h, double T, const ConstantSet& constants);
/// (L T e^{L T} + 1) delta_1(h).
double gronwall_bound(double h, double T, double L, const ConstantSet& constants);

struct StudyRow {
  double h = 0;
  double sup_error = 0;
  double runtime_seconds = 0;
  bool ok = false;
  std::string message;
  double gronwall_bound = 0;
  std::optional<SolveResult> solution;
};

/// Memory solutions for each h against one limit reference.  Rows follow the
/// (descending) h order of the input.
struct StudyTable {
  std::vector<StudyRow> rows{};
  bool monotone = false;  ///< sup errors strictly decrease down the rows
  SolveResult reference;  ///< limit solve at dt / 4
  LipschitzEstimate lipschitz{};
  BoundReport gronwall{};
};

/// `delta` is the exponent slack entering the Gronwall envelope.
StudyTable convergence_study(const SolverConfig& config, const std::vector<double>& h_list,
                              double delta = 0.05);

}  // namespace imde
