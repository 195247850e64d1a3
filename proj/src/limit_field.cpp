#include "imde/limit_field.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "imde/errors.hpp"
#include "imde/quadrature.hpp"

namespace imde {

namespace {

constexpr double kPi = std::numbers::pi;

void require_supported(int d, const char* what) {
  if (d < 3 || d > 5) {
    throw UnsupportedDimension(std::string(what) + ": supported dimensions are 3, 4, 5 (got " +
                               std::to_string(d) + ")");
  }
}

struct SphereNodes {
  Eigen::MatrixXd points;
  Eigen::VectorXd weights;
};

const SphereNodes& cached_sphere(int k, int polar, int azimuth) {
  static std::mutex mutex;
  static std::map<std::tuple<int, int, int>, SphereNodes> cache;
  std::lock_guard<std::mutex> lock(mutex);
  const auto key = std::make_tuple(k, polar, azimuth);
  auto it = cache.find(key);
  if (it == cache.end()) {
    auto [points, weights] = sphere_rule<double>(k, polar, azimuth);
    it = cache.emplace(key, SphereNodes{std::move(points), std::move(weights)}).first;
  }
  return it->second;
}

}  // namespace

Eigen::MatrixXd orthonormal_completion(const Eigen::VectorXd& unit) {
  const Eigen::Index d = unit.size();
  Eigen::VectorXd w = -unit;
  w[0] += 1;
  Eigen::MatrixXd reflection = Eigen::MatrixXd::Identity(d, d);
  const double norm2 = w.squaredNorm();
  if (norm2 > 1e-30) reflection -= 2 * w * w.transpose() / norm2;
  return reflection.rightCols(d - 1);
}

Eigen::VectorXd eval_F0(const Eigen::VectorXd& u, const Profile<double>& profile,
                        const SphereQuadSpec& squad) {
  const int d = profile.dimension();
  require_supported(d, "eval_F0");
  if (u.size() != d) throw InputError("eval_F0: dimension mismatch");
  const double speed = u.norm();
  if (!(speed > 0)) throw SingularInput("eval_F0: the limit field is undefined at u = 0");

  const Eigen::VectorXd direction = u / speed;
  const Eigen::MatrixXd basis = orthonormal_completion(direction);
  const SphereNodes& ring = cached_sphere(d - 2, squad.circle_nodes, squad.circle_nodes);
  const Eigen::MatrixXd transverse = basis * ring.points;  // d x m, unit vectors orthogonal to u
  const auto& rule = gauss_legendre_cached(squad.rho_nodes);

  Eigen::VectorXd sum = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd eta(d);
  for (Eigen::Index i = 0; i < rule.size(); ++i) {
    const double theta = kPi / 2 * (rule.nodes[i] + 1);
    const double rho = 1 - std::cos(theta);
    const double sine = std::sin(theta);
    // H^{d-1} on u^ + S^{d-1} in these coordinates is sin^{d-2}(theta) dtheta dH^{d-2}.
    const double w = kPi / 2 * rule.weights[i] * std::pow(sine, d - 2);
    for (Eigen::Index j = 0; j < transverse.cols(); ++j) {
      eta = rho * direction + sine * transverse.col(j);
      sum += (w * ring.weights[j] * eval_f_squared(profile, (speed * eta).eval())) * eta;
    }
  }
  return -kPi * std::pow(speed, d - 1) * sum;
}

double eval_F0_radial_coeff(double speed, const Profile<double>& profile,
                            const SphereQuadSpec& squad) {
  const int d = profile.dimension();
  require_supported(d, "eval_F0_radial_coeff");
  if (!profile.radial()) throw InputError("eval_F0_radial_coeff: profile is not radial");
  if (!(speed > 0)) throw SingularInput("eval_F0_radial_coeff: speed must be > 0");
  const double s2 = profile.width() * profile.width();
  const double a2 = profile.amplitude() * profile.amplitude();
  // On the sphere |eta|^2 = 2 rho, so |f(|u| eta)|^2 = A^2 exp(-2 rho |u|^2 / s^2).
  const double integral = integrate_composite(
      [&](double theta) {
        const double rho = 1 - std::cos(theta);
        return rho * std::exp(-2 * rho * speed * speed / s2) * std::pow(std::sin(theta), d - 2);
      },
      0.0, kPi, 1, gauss_legendre_cached(squad.rho_nodes));
  return kPi * std::pow(speed, d - 1) * a2 * sphere_area(d - 2) * integral;
}

double dissipation(const Eigen::VectorXd& u, const Profile<double>& profile,
                   const SphereQuadSpec& squad) {
  return u.dot(eval_F0(u, profile, squad));
}

}  // namespace imde
