#include "imde/integrators.hpp"

#include <cmath>
#include <sstream>

namespace imde {

std::size_t SolverConfig::steps() const {
  return static_cast<std::size_t>(std::ceil(T / dt - 1e-9));
}

double SolverConfig::resolved_fp_tol() const {
  return fp_tol > 0 ? fp_tol : 1e-10 * (1 + xi0.norm());
}

void validate(const SolverConfig& config) {
  const int d = config.dimension();
  if (d < 3 || d > 5) {
    throw UnsupportedDimension("solver: supported dimensions are 3, 4, 5 (got " +
                               std::to_string(d) + ")");
  }
  if (!(config.T > 0)) throw InputError("solver: T must be > 0");
  if (!(config.dt > 0 && config.dt <= config.T)) throw InputError("solver: need 0 < dt <= T");
  if (config.xi0.size() != d) throw InputError("solver: xi0 dimension differs from the profile");
  if (!(config.xi0.norm() > 0)) throw InputError("solver: xi0 must be non-zero");
  if (config.h && !(*config.h > 0)) throw InputError("solver: h must be > 0");
  if (config.fp_max_iter < 1) throw InputError("solver: fp_max_iter must be >= 1");
}

SolveResult integrate_rk4(const LocalField& field, const Eigen::VectorXd& xi0, double dt,
                          std::size_t steps, double floor) {
  SolveResult result{Trajectory(dt, xi0), {}, false, {}, {}, 0};
  Eigen::VectorXd xi = xi0;
  try {
    Eigen::VectorXd k1 = field(xi);
    result.field.push_back(k1);
    for (std::size_t n = 0; n < steps; ++n) {
      const Eigen::VectorXd k2 = field(xi + dt / 2 * k1);
      const Eigen::VectorXd k3 = field(xi + dt / 2 * k2);
      const Eigen::VectorXd k4 = field(xi + dt * k3);
      xi += dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
      if (xi.norm() < floor) {
        std::ostringstream msg;
        msg << "|xi| = " << xi.norm() << " fell below the floor " << floor << " at t = "
            << dt * static_cast<double>(n + 1) << "; trajectory truncated";
        result.truncated = true;
        result.diagnostic = msg.str();
        return result;
      }
      result.trajectory.push_back(xi);
      k1 = field(xi);
      result.field.push_back(k1);
    }
  } catch (const SingularInput& e) {
    result.truncated = true;
    result.diagnostic = std::string("field evaluation failed near u = 0: ") + e.what();
    if (result.field.size() > result.trajectory.size()) result.field.pop_back();
  }
  return result;
}

SolveResult integrate_predictor_corrector(const HistoryField& field, const Eigen::VectorXd& xi0,
                                          double dt, std::size_t steps, double fp_tol,
                                          int fp_max_iter) {
  SolveResult result{Trajectory(dt, xi0), {}, false, {}, {}, 0};
  Trajectory& history = result.trajectory;
  Eigen::VectorXd current = field(history, 0.0);
  result.field.push_back(current);
  for (std::size_t n = 0; n < steps; ++n) {
    const double t_next = dt * static_cast<double>(n + 1);
    const Eigen::VectorXd xi = history.back();
    history.push_back(xi + dt * current);
    double residual = 0;
    int iterations = 0;
    bool settled = false;
    while (iterations < fp_max_iter) {
      ++iterations;
      const Eigen::VectorXd next = xi + dt / 2 * (current + field(history, t_next));
      residual = (next - history.back()).norm();
      history.replace_back(next);
      if (residual <= fp_tol) {
        settled = true;
        break;
      }
    }
    result.max_fixed_point_iterations = std::max(result.max_fixed_point_iterations, iterations);
    if (!settled) {
      std::ostringstream msg;
      msg << "fixed-point sweep did not settle at step " << n + 1 << " (t = " << t_next
          << "): residual " << residual << " > tolerance " << fp_tol << " after " << iterations
          << " iterations";
      SolveResult partial{Trajectory(dt, xi0), result.field, false, msg.str(), result.warnings,
                          result.max_fixed_point_iterations};
      for (std::size_t k = 1; k + 1 < history.size(); ++k) partial.trajectory.push_back(history.value(k));
      throw FixedPointError(msg.str(), std::move(partial), n + 1, iterations, residual);
    }
    current = field(history, t_next);
    result.field.push_back(current);
  }
  return result;
}

SolveResult solve_limit(const SolverConfig& config) {
  validate(config);
  const Profile<double>& profile = config.profile;
  const SphereQuadSpec squad = config.squad;
  return integrate_rk4([&](const Eigen::VectorXd& u) { return eval_F0(u, profile, squad); },
                       config.xi0, config.dt, config.steps(), 1e-6 * config.xi0.norm());
}

SolveResult solve_memory(const SolverConfig& config) {
  validate(config);
  if (!config.h) throw InputError("solve_memory: h is required (LIMIT selects solve_limit)");
  const double h = *config.h;
  const Profile<double>& profile = config.profile;
  const QuadratureSpec quad = config.quad;

  std::vector<std::string> warnings;
  const double window = h * h / (8 * moment_constant(profile));
  if (config.dt * (config.T + config.dt) > window) {
    std::ostringstream msg;
    msg << "dt (T + dt) = " << config.dt * (config.T + config.dt)
        << " exceeds the contraction window h^2 / (8 C_g) = " << window;
    warnings.push_back(msg.str());
  }

  SolveResult result = integrate_predictor_corrector(
      [&](const Trajectory& history, double t) {
        return eval_memory_field(history, t, h, profile, quad);
      },
      config.xi0, config.dt, config.steps(), config.resolved_fp_tol(), config.fp_max_iter);
  result.warnings.insert(result.warnings.begin(), warnings.begin(), warnings.end());
  return result;
}

}  // namespace imde
