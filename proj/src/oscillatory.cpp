#include "imde/oscillatory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "imde/errors.hpp"
#include "imde/quadrature.hpp"

namespace imde {

namespace {

using Complex = std::complex<double>;

void require_positive_times(double t, double h, const char* what) {
  if (!(t > 0)) throw InputError(std::string(what) + ": t must be > 0");
  if (!(h > 0)) throw InputError(std::string(what) + ": h must be > 0");
}

void require_dimension(const Profile<double>& profile, const Eigen::VectorXd& u, const char* what) {
  if (u.size() != profile.dimension()) {
    throw InputError(std::string(what) + ": vector has " + std::to_string(u.size()) +
                     " components, profile dimension is " + std::to_string(profile.dimension()));
  }
}

// Accumulates \int_a^b M(r, v(r)) dr with `order` nodes on each of `panels`
// equal panels.
template <typename Average>
void accumulate_pieces(Eigen::VectorXcd& sum, const Profile<double>& profile, double a, double b,
                       int order, double max_length, Average&& average) {
  if (!(b > a)) return;
  const auto& rule = gauss_legendre_cached(order);
  const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / max_length)));
  const double width = (b - a) / panels;
  const double half = width / 2;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + width * p + half;
    for (Eigen::Index i = 0; i < rule.size(); ++i) {
      const double r = mid + half * rule.nodes[i];
      sum += (half * rule.weights[i]) * gaussian_phase_moment(profile, r, average(r));
    }
  }
}

}  // namespace

Eigen::VectorXcd gaussian_phase_moment(const Profile<double>& profile, double r,
                                       const Eigen::VectorXd& v) {
  const double s2 = profile.width() * profile.width();
  const double a2 = profile.amplitude() * profile.amplitude();
  const Complex a(1 / s2, r);
  const Eigen::VectorXcd b =
      Complex(0, 2 * r) * v.cast<Complex>() + (2 / s2) * profile.center().cast<Complex>();
  const Complex bb = (b.array() * b.array()).sum();
  const Complex exponent = bb / (4.0 * a) - profile.center().squaredNorm() / s2;
  const Complex scale = a2 * std::pow(std::numbers::pi / a, profile.dimension() / 2.0) *
                        std::exp(exponent) / (2.0 * a);
  return scale * b;
}

double certified_eta_radius(const Profile<double>& profile, double tolerance) {
  return gaussian_tail_radius(profile.dimension() + 1, profile.width(), tolerance);
}

double sinc_kernel(double R, double phi) {
  const double x = R * phi;
  if (std::abs(x) < 1e-4) return R * (1 - x * x / 6);
  return std::sin(x) / phi;
}

Eigen::VectorXd eval_F_h_frozen(const Eigen::VectorXd& u, double t, double h,
                                const Profile<double>& profile, const QuadratureSpec& quad) {
  require_positive_times(t, h, "eval_F_h_frozen");
  require_dimension(profile, u, "eval_F_h_frozen");
  Eigen::VectorXcd sum = Eigen::VectorXcd::Zero(u.size());
  accumulate_pieces(sum, profile, 0.0, t / h, quad.r_order, quad.r_panel_length,
                    [&](double) -> const Eigen::VectorXd& { return u; });
  return -2 * sum.real();
}

Eigen::VectorXd eval_F_h_frozen_tensor(const Eigen::VectorXd& u, double t, double h,
                                       const Profile<double>& profile,
                                       const QuadratureSpec& quad) {
  require_positive_times(t, h, "eval_F_h_frozen_tensor");
  require_dimension(profile, u, "eval_F_h_frozen_tensor");
  const int d = profile.dimension();
  const double R = t / h;
  const double radius =
      quad.eta_radius > 0 ? quad.eta_radius : certified_eta_radius(profile, quad.tail_tolerance);

  constexpr int kPanelOrder = 8;
  const int panels = std::max(1, (quad.eta_nodes_per_axis + kPanelOrder - 1) / kPanelOrder);
  const auto& rule = gauss_legendre_cached(kPanelOrder);
  const int n = panels * kPanelOrder;
  const double width = 2 * radius / panels;
  Eigen::VectorXd offsets(n), weights(n);
  for (int p = 0; p < panels; ++p) {
    for (int i = 0; i < kPanelOrder; ++i) {
      offsets[p * kPanelOrder + i] = -radius + width * (p + 0.5 * (rule.nodes[i] + 1));
      weights[p * kPanelOrder + i] = 0.5 * width * rule.weights[i];
    }
  }

  Eigen::VectorXd sum = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd eta(d);
  std::vector<int> index(d, 0);
  for (;;) {
    double weight = 1;
    for (int j = 0; j < d; ++j) {
      eta[j] = profile.center()[j] + offsets[index[j]];
      weight *= weights[index[j]];
    }
    sum += (weight * sinc_kernel(R, phase(eta, u)) * eval_f_squared(profile, eta)) * eta;
    int axis = 0;
    while (axis < d && ++index[axis] == n) index[axis++] = 0;
    if (axis == d) break;
  }
  return -2 * sum;
}

Eigen::VectorXd eval_memory_field(const Trajectory& trajectory, double t, double h,
                                  const Profile<double>& profile, const QuadratureSpec& quad) {
  if (!(h > 0)) throw InputError("eval_memory_field: h must be > 0");
  if (trajectory.dimension() != profile.dimension()) {
    throw InputError("eval_memory_field: trajectory and profile dimensions differ");
  }
  if (!trajectory.covers(t)) {
    throw InputError("eval_memory_field: trajectory covers [0, " +
                     std::to_string(trajectory.horizon()) + "], requested t = " +
                     std::to_string(t));
  }
  const int d = profile.dimension();
  if (t <= 0) return Eigen::VectorXd::Zero(d);

  // Break points r_k = (t - k dt) / h for grid nodes 0 < k dt < t, ascending.
  const double dt = trajectory.dt();
  std::vector<double> breaks{0.0};
  const long last = static_cast<long>(std::ceil(t / dt - 1e-9)) - 1;
  for (long k = last; k >= 1; --k) {
    const double r = (t - dt * static_cast<double>(k)) / h;
    if (r > breaks.back()) breaks.push_back(r);
  }
  const double upper = t / h;
  if (upper > breaks.back()) breaks.push_back(upper);

  Eigen::VectorXcd sum = Eigen::VectorXcd::Zero(d);
  auto average = [&](double r) {
    return running_average(trajectory, t, std::clamp(h * r, 0.0, t));
  };
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    accumulate_pieces(sum, profile, breaks[i], breaks[i + 1], quad.r_substeps_per_history_step,
                      quad.r_panel_length, average);
  }
  return -2 * sum.real();
}

}  // namespace imde
