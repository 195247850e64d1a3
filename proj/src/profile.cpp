#include "imde/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "imde/quadrature.hpp"

namespace imde {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kOrder = 16;

// Composite rule on [0, radius] with panels no wider than `panel_width`.
template <typename F>
double integrate_radial(F&& f, double radius, double panel_width, int refinement) {
  const int panels = std::max(4, static_cast<int>(std::ceil(radius / panel_width))) * refinement;
  return integrate_composite(f, 0.0, radius, panels, gauss_legendre_cached(kOrder));
}

}  // namespace

double gaussian_tail_radius(int power, double sigma, double tolerance) {
  const double m = power;
  const double total = std::pow(sigma, m + 1) * std::tgamma((m + 1) / 2) / 2;
  double radius = sigma * (std::sqrt(m) + 1);
  for (;;) {
    const double kappa = 2 * radius / (sigma * sigma) - m / radius;
    const double bound =
        std::pow(radius, m) * std::exp(-radius * radius / (sigma * sigma)) / kappa;
    if (bound <= tolerance * total) return radius;
    radius += sigma / 8;
  }
}

double moment_constant(const Profile<double>& profile) {
  const double s2 = profile.width() * profile.width();
  const double a2 = profile.amplitude() * profile.amplitude();
  const int d = profile.dimension();
  return a2 * std::pow(kPi * s2, d / 2.0) * (profile.center().squaredNorm() + d * s2 / 2);
}

double norm_g_L1(const Profile<double>& profile, const ConstantsQuadrature& quad) {
  const int d = profile.dimension();
  const double s = profile.width();
  const double a2 = profile.amplitude() * profile.amplitude();
  const double shift = profile.center().norm();
  const double tail = gaussian_tail_radius(d, s, quad.tail_tolerance);

  if (profile.radial()) {
    const double integral = integrate_radial(
        [&](double rho) { return std::pow(rho, d) * std::exp(-rho * rho / (s * s)); }, tail,
        s / 2, quad.refinement);
    return a2 * sphere_area(d - 1) * integral;
  }

  // Polar angle theta measured from c; the remaining S^{d-2} integrates to
  // its area.  The integrand peaks at theta = 0 with width ~ s / sqrt(rho |c|).
  const double outer = shift + tail;
  const int theta_panels =
      (8 + static_cast<int>(std::ceil(4 * std::sqrt(outer * shift) / s))) * quad.refinement;
  const auto& rule = gauss_legendre_cached(kOrder);
  const double ring = d >= 2 ? sphere_area(d - 2) : 1.0;
  const double integral = integrate_radial(
      [&](double rho) {
        const double angular = integrate_composite(
            [&](double theta) {
              const double dist2 = rho * rho - 2 * rho * shift * std::cos(theta) + shift * shift;
              return std::pow(std::sin(theta), d - 2) * std::exp(-dist2 / (s * s));
            },
            0.0, kPi, theta_panels, rule);
        return std::pow(rho, d) * angular;
      },
      outer, s / 2, quad.refinement);
  return a2 * ring * integral;
}

double norm_ghat_L1(const Profile<double>& profile, const ConstantsQuadrature& quad) {
  const int d = profile.dimension();
  const double s2 = profile.width() * profile.width();
  const double a2 = profile.amplitude() * profile.amplitude();
  const double c2 = profile.center().squaredNorm();
  const double beta = s2 / 2;
  const double tail = gaussian_tail_radius(d + 2, 2 / profile.width(), quad.tail_tolerance);
  const double integral = integrate_radial(
      [&](double rho) {
        const double modulus = std::sqrt(c2 + beta * beta * rho * rho);
        return std::pow(rho, d - 1) * std::exp(-s2 * rho * rho / 4) * modulus;
      },
      tail, 1 / profile.width(), quad.refinement);
  return a2 * std::pow(beta, d / 2.0) * sphere_area(d - 1) * integral;
}

double norm_ghat_prime_L1(const Profile<double>& profile, const ConstantsQuadrature& quad) {
  const int d = profile.dimension();
  const double s2 = profile.width() * profile.width();
  const double a2 = profile.amplitude() * profile.amplitude();
  const double c2 = profile.center().squaredNorm();
  const double beta = s2 / 2;
  const double tail = gaussian_tail_radius(d + 3, 2 / profile.width(), quad.tail_tolerance);
  // Dg^ = -i A^2 G (a a^T + beta I) with a = c - i beta y, so
  // |Dg^|_F^2 = A^4 |G|^2 (|a|^4 + 2 beta Re(a.a) + d beta^2).
  const double integral = integrate_radial(
      [&](double rho) {
        const double b2 = beta * beta * rho * rho;
        const double abs_a2 = c2 + b2;
        const double frob2 = abs_a2 * abs_a2 + 2 * beta * (c2 - b2) + d * beta * beta;
        return std::pow(rho, d - 1) * std::exp(-s2 * rho * rho / 4) * std::sqrt(frob2);
      },
      tail, 1 / profile.width(), quad.refinement);
  return a2 * std::pow(beta, d / 2.0) * sphere_area(d - 1) * integral;
}

double sphere_dissipation_constant(int dimension) {
  if (dimension < 3) {
    throw UnsupportedDimension("sphere_dissipation_constant requires d >= 3, got d = " +
                               std::to_string(dimension));
  }
  // rho = 1 - cos(theta): \int_0^2 rho (2 rho - rho^2)^{(d-3)/2} d rho
  //                     = \int_0^pi (1 - cos t) sin^{d-2} t dt.
  const double radial = integrate_composite(
      [&](double theta) { return (1 - std::cos(theta)) * std::pow(std::sin(theta), dimension - 2); },
      0.0, kPi, 8, gauss_legendre_cached(kOrder));
  return 2 * kPi * sphere_area(dimension - 2) * radial;
}

ConstantSet compute_constants(const Profile<double>& profile, double delta,
                              const ConstantsQuadrature& quad) {
  const int d = profile.dimension();
  if (d < 3) {
    throw UnsupportedDimension(
        "compute_constants: C1_g, C2_g, C3_g and C_d are only defined for d >= 3 (got d = " +
        std::to_string(d) + ")");
  }
  const double nu = (d - 2) / 4.0;
  if (!(delta > 0 && delta < nu)) {
    throw InputError("compute_constants: delta must lie in (0, " + std::to_string(nu) + ")");
  }

  ConstantSet out;
  out.dimension = d;
  out.delta = delta;
  out.nu = nu;
  out.C_g = moment_constant(profile);
  out.norm_g_L1 = norm_g_L1(profile, quad);
  out.norm_ghat_L1 = norm_ghat_L1(profile, quad);
  out.norm_ghat_prime_L1 = norm_ghat_prime_L1(profile, quad);
  const double pi_d2 = std::pow(kPi, d / 2.0);
  out.C3_g = (d / 2.0 - 1) * pi_d2 * out.norm_ghat_L1;
  out.C1_g = out.norm_g_L1 + out.C3_g;
  out.C2_g = 4 * out.norm_g_L1 + 2 * pi_d2 * (out.C1_g * out.norm_ghat_prime_L1 + out.norm_ghat_L1);
  out.C_d = sphere_dissipation_constant(d);
  return out;
}

}  // namespace imde
