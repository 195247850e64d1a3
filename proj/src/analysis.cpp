#include "imde/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "imde/limit_field.hpp"
#include "imde/oscillatory.hpp"

namespace imde {

void BoundReport::add(double abscissa, double observed, double envelope, double lower) {
  samples.push_back({abscissa, observed, envelope, lower});
}

void BoundReport::finalize() {
  violated = false;
  max_ratio = 0;
  for (const BoundSample& s : samples) {
    if (s.observed > s.envelope * (1 + slack)) violated = true;
    if (std::isfinite(s.lower) && s.observed < s.lower * (1 - slack)) violated = true;
    double ratio = 0;
    if (s.envelope > 0) {
      ratio = s.observed / s.envelope;
    } else if (s.observed > 0) {
      ratio = std::numeric_limits<double>::infinity();
    }
    max_ratio = std::max(max_ratio, ratio);
  }
}

BoundReport check_decay(const Trajectory& trajectory, double slack) {
  BoundReport report{.name = "decay", .slack = slack};
  for (std::size_t k = 0; k + 1 < trajectory.size(); ++k) {
    report.add(trajectory.time(k + 1), trajectory.value(k + 1).norm(), trajectory.value(k).norm());
  }
  report.finalize();
  return report;
}

bool strictly_decreasing_norm(const Trajectory& trajectory) {
  for (std::size_t k = 0; k + 1 < trajectory.size(); ++k) {
    if (!(trajectory.value(k + 1).norm() < trajectory.value(k).norm())) return false;
  }
  return true;
}

BoundReport check_derivative_bound(const Trajectory& trajectory, const ConstantSet& constants,
                                   double slack) {
  BoundReport report{.name = "derivative_bound", .slack = slack};
  const double envelope = 2 * constants.C1_g;
  for (std::size_t k = 0; k + 1 < trajectory.size(); ++k) {
    const double derivative =
        (trajectory.value(k + 1) - trajectory.value(k)).norm() / trajectory.dt();
    report.add(trajectory.time(k), derivative, envelope);
  }
  report.finalize();
  return report;
}

BoundReport check_avg_control(const Trajectory& trajectory, double h, const ConstantSet& constants,
                              int t_count, int r_count) {
  BoundReport report{.name = "avg_control", .abscissa_label = "grid_index"};
  const double T = trajectory.horizon();
  int index = 0;
  for (int i = 1; i <= t_count; ++i) {
    const double t = T * i / t_count;
    const Eigen::VectorXd here = trajectory.interpolate(t);
    for (int j = 1; j <= r_count; ++j) {
      const double span = t * j / (r_count + 1);
      const double r = span / h;
      const double observed = (running_average(trajectory, t, span) - here).norm();
      report.add(index++, observed, constants.C1_g * h * r);
    }
  }
  report.finalize();
  return report;
}

namespace {
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0 && y[i] > 0)) continue;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}
}  // namespace

FrozenLimitReport check_frozen_vs_limit(const Eigen::VectorXd& u, const std::vector<double>& t_grid,
                                        const std::vector<double>& h_grid,
                                        const Profile<double>& profile,
                                        const ConstantSet& constants, const QuadratureSpec& quad,
                                        const SphereQuadSpec& squad, double slack) {
  FrozenLimitReport out;
  out.report = BoundReport{.name = "lemma_frozen_vs_limit", .abscissa_label = "h", .slack = slack};
  const Eigen::VectorXd limit = eval_F0(u, profile, squad);
  const double exponent = constants.dimension / 2.0 - 1;
  for (double t : t_grid) {
    std::vector<double> diffs;
    for (double h : h_grid) {
      const double diff = (eval_F_h_frozen(u, t, h, profile, quad) - limit).norm();
      diffs.push_back(diff);
      out.report.add(h, diff, constants.C3_g * std::pow(h / t, exponent));
    }
    out.slopes.push_back(loglog_slope(h_grid, diffs));
  }
  out.report.finalize();
  return out;
}

BoundReport check_memory_vs_frozen(const Trajectory& trajectory, double h,
                                   const std::vector<double>& times,
                                   const Profile<double>& profile, const ConstantSet& constants,
                                   const QuadratureSpec& quad, double slack) {
  BoundReport report{.name = "lemma_memory_vs_frozen", .slack = slack};
  const double envelope = constants.C2_g * std::pow(h, constants.nu - constants.delta);
  for (double t : times) {
    if (!(t > 0)) continue;
    const Eigen::VectorXd memory = eval_memory_field(trajectory, t, h, profile, quad);
    const Eigen::VectorXd frozen =
        eval_F_h_frozen(trajectory.interpolate(t), t, h, profile, quad);
    report.add(t, (memory - frozen).norm(), envelope);
  }
  report.finalize();
  return report;
}

LemmaReports check_lemma_envelopes(const Eigen::VectorXd& u, const std::vector<double>& t_grid,
                                   const std::vector<double>& h_grid,
                                   const Profile<double>& profile, const ConstantSet& constants,
                                   const Trajectory& memory, double h_memory,
                                   const std::vector<double>& memory_times,
                                   const QuadratureSpec& quad, const SphereQuadSpec& squad) {
  return {check_frozen_vs_limit(u, t_grid, h_grid, profile, constants, quad, squad),
          check_memory_vs_frozen(memory, h_memory, memory_times, profile, constants, quad)};
}

SquaredExtremes f_squared_extremes(const Profile<double>& profile, double radius) {
  const double a2 = profile.amplitude() * profile.amplitude();
  const double s2 = profile.width() * profile.width();
  const double shift = profile.center().norm();
  const double nearest = std::max(0.0, shift - radius);
  const double farthest = shift + radius;
  return {a2 * std::exp(-farthest * farthest / s2), a2 * std::exp(-nearest * nearest / s2)};
}

std::vector<double> comparison_ode(double C, double power, double y0,
                                   const std::vector<double>& times, double max_step) {
  std::vector<double> out;
  out.reserve(times.size());
  auto rhs = [&](double y) { return -C * std::pow(std::max(y, 0.0), power); };
  double y = y0;
  double t = 0;
  for (double target : times) {
    const double span = target - t;
    if (span > 0) {
      const int n = static_cast<int>(std::ceil(span / max_step - 1e-9));
      const double step = span / n;
      for (int i = 0; i < n; ++i) {
        const double k1 = rhs(y);
        const double k2 = rhs(y + step / 2 * k1);
        const double k3 = rhs(y + step / 2 * k2);
        const double k4 = rhs(y + step * k3);
        y += step / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
      }
      t = target;
    }
    out.push_back(y);
  }
  return out;
}

BoundReport sandwich_envelopes(const Trajectory& trajectory, const Profile<double>& profile,
                               const ConstantSet& constants, double oracle_step, double slack) {
  BoundReport report{.name = "sandwich", .slack = slack};
  const double y0 = trajectory.value(0).squaredNorm();
  const SquaredExtremes extremes = f_squared_extremes(profile, 2 * std::sqrt(y0));
  if (!(extremes.min > 0)) {
    report.applicable = false;
    report.note = "min |f|^2 vanishes on B(0, 2|xi_0|); the comparison hypothesis fails";
    return report;
  }
  const double power = constants.dimension / 2.0;
  std::vector<double> times;
  for (std::size_t k = 1; k < trajectory.size(); ++k) times.push_back(trajectory.time(k));
  const std::vector<double> upper =
      comparison_ode(constants.C_d * extremes.min, power, y0, times, oracle_step);
  const std::vector<double> lower =
      comparison_ode(constants.C_d * extremes.max, power, y0, times, oracle_step);
  for (std::size_t i = 0; i < times.size(); ++i) {
    report.add(times[i], trajectory.value(i + 1).squaredNorm(), upper[i], lower[i]);
  }
  report.finalize();
  return report;
}

LipschitzEstimate estimate_lipschitz(const Trajectory& trajectory, const Profile<double>& profile,
                                     const SphereQuadSpec& squad, double margin) {
  const int d = trajectory.dimension();
  double smallest = std::numeric_limits<double>::infinity(), largest = 0;
  for (const auto& xi : trajectory.values()) {
    smallest = std::min(smallest, xi.norm());
    largest = std::max(largest, xi.norm());
  }
  LipschitzEstimate out;
  const double widen = margin * smallest;
  out.inner = smallest - widen;
  out.outer = largest + widen;

  // Directions: +-e_i and the normalized sign patterns of (1, ..., 1).
  std::vector<Eigen::VectorXd> directions;
  for (int i = 0; i < d; ++i) {
    directions.push_back(Eigen::VectorXd::Unit(d, i));
    directions.push_back(-Eigen::VectorXd::Unit(d, i));
  }
  for (int mask = 0; mask < (1 << d); ++mask) {
    Eigen::VectorXd v(d);
    for (int i = 0; i < d; ++i) v[i] = (mask >> i) & 1 ? -1.0 : 1.0;
    directions.push_back(v.normalized());
  }

  constexpr int kRadii = 12;
  for (int i = 0; i < kRadii; ++i) {
    const double radius = out.inner + (out.outer - out.inner) * i / (kRadii - 1);
    for (const auto& direction : directions) {
      const Eigen::VectorXd u = radius * direction;
      const double step = 1e-5 * radius;
      Eigen::MatrixXd jacobian(d, d);
      for (int j = 0; j < d; ++j) {
        const Eigen::VectorXd e = step * Eigen::VectorXd::Unit(d, j);
        jacobian.col(j) =
            (eval_F0(u + e, profile, squad) - eval_F0(u - e, profile, squad)) / (2 * step);
      }
      const double norm = Eigen::JacobiSVD<Eigen::MatrixXd>(jacobian).singularValues()[0];
      out.L = std::max(out.L, norm);
    }
  }
  return out;
}

double gronwall_delta(double h, double T, const ConstantSet& constants) {
  const int d = constants.dimension;
  return std::sqrt(h) + T * (constants.C2_g * std::pow(h, constants.nu - constants.delta) +
                             constants.C3_g * std::pow(h, (d - 2) / 4.0));
}

double gronwall_bound(double h, double T, double L, const ConstantSet& constants) {
  return (L * T * std::exp(L * T) + 1) * gronwall_delta(h, T, constants);
}

StudyTable convergence_study(const SolverConfig& config, const std::vector<double>& h_list,
                              double delta) {
  if (h_list.empty()) throw InputError("convergence_study: h list is empty");
  for (std::size_t i = 0; i < h_list.size(); ++i) {
    if (!(h_list[i] > 0)) throw InputError("convergence_study: every h must be > 0");
    if (i > 0 && !(h_list[i] < h_list[i - 1])) {
      throw InputError("convergence_study: h list must be strictly descending");
    }
  }
  validate(config);

  SolverConfig reference_config = config;
  reference_config.h.reset();
  reference_config.dt = config.dt / 4;
  StudyTable table{.reference = solve_limit(reference_config)};
  const Trajectory& reference = table.reference.trajectory;
  const ConstantSet constants = compute_constants(config.profile, delta);
  table.lipschitz = estimate_lipschitz(reference, config.profile, config.squad);
  table.gronwall = BoundReport{.name = "gronwall", .abscissa_label = "h"};

  for (double h : h_list) {
    StudyRow row;
    row.h = h;
    SolverConfig memory_config = config;
    memory_config.h = h;
    const auto start = std::chrono::steady_clock::now();
    try {
      SolveResult solution = solve_memory(memory_config);
      const Trajectory& path = solution.trajectory;
      for (std::size_t k = 0; k < path.size() && 4 * k < reference.size(); ++k) {
        row.sup_error = std::max(row.sup_error, (path.value(k) - reference.value(4 * k)).norm());
      }
      row.ok = true;
      row.solution = std::move(solution);
    } catch (const std::exception& e) {
      row.ok = false;
      row.message = e.what();
    }
    row.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    row.gronwall_bound = gronwall_bound(h, config.T, table.lipschitz.L, constants);
    if (row.ok) table.gronwall.add(h, row.sup_error, row.gronwall_bound);
    table.rows.push_back(std::move(row));
  }
  table.gronwall.finalize();

  table.monotone = true;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    if (!table.rows[i].ok) table.monotone = false;
    if (i > 0 && !(table.rows[i].sup_error < table.rows[i - 1].sup_error)) table.monotone = false;
  }
  return table;
}

}  // namespace imde
