#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "imde/errors.hpp"

namespace imde {

/// Gaussian coupling profile f(eta) = A exp(-|eta - c|^2 / (2 s^2)).
///
/// The family is closed under the operations the solvers need: |f|^2, the
/// vector field g(eta) = eta |f(eta)|^2 and its Fourier transform all have
/// closed forms.  A = 0 is accepted as the degenerate (field-free) profile.
template <typename Scalar>
class Profile {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Profile(int dimension, Scalar amplitude, Vector center, Scalar width)
      : dimension_(dimension), amplitude_(amplitude), center_(std::move(center)), width_(width) {
    if (dimension_ < 1) throw InputError("Profile: dimension must be >= 1");
    if (!(amplitude_ >= 0)) throw InputError("Profile: amplitude must be >= 0");
    if (!(width_ > 0)) throw InputError("Profile: width must be > 0");
    if (center_.size() != dimension_) {
      throw InputError("Profile: center has " + std::to_string(center_.size()) +
                       " components, expected " + std::to_string(dimension_));
    }
  }

  static Profile centered(int dimension, Scalar amplitude, Scalar width) {
    return Profile(dimension, amplitude, Vector::Zero(dimension), width);
  }

  int dimension() const { return dimension_; }
  Scalar amplitude() const { return amplitude_; }
  const Vector& center() const { return center_; }
  Scalar width() const { return width_; }

  /// |f|^2 depends on |eta| only.
  bool radial() const { return center_.isZero(0); }

  template <typename NewScalar>
  Profile<NewScalar> cast() const {
    return Profile<NewScalar>(dimension_, NewScalar(amplitude_), center_.template cast<NewScalar>(),
                              NewScalar(width_));
  }

 private:
  int dimension_;
  Scalar amplitude_;
  Vector center_;
  Scalar width_;
};

namespace detail {
template <typename Scalar, typename Derived>
void check_dimension(const Profile<Scalar>& profile, const Eigen::MatrixBase<Derived>& x,
                     const char* what) {
  if (x.size() != profile.dimension()) {
    throw InputError(std::string(what) + ": argument has " + std::to_string(x.size()) +
                     " components, profile dimension is " + std::to_string(profile.dimension()));
  }
}
}  // namespace detail

template <typename Scalar, typename Derived>
Scalar eval_f(const Profile<Scalar>& profile, const Eigen::MatrixBase<Derived>& eta) {
  detail::check_dimension(profile, eta, "eval_f");
  const Scalar s = profile.width();
  return profile.amplitude() * std::exp(-(eta - profile.center()).squaredNorm() / (2 * s * s));
}

/// |f(eta)|^2, evaluated without squaring the exponential.
template <typename Scalar, typename Derived>
Scalar eval_f_squared(const Profile<Scalar>& profile, const Eigen::MatrixBase<Derived>& eta) {
  const Scalar s = profile.width();
  const Scalar a = profile.amplitude();
  return a * a * std::exp(-(eta - profile.center()).squaredNorm() / (s * s));
}

/// g(eta) = eta |f(eta)|^2.
template <typename Scalar, typename Derived>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> eval_g(const Profile<Scalar>& profile,
                                                const Eigen::MatrixBase<Derived>& eta) {
  detail::check_dimension(profile, eta, "eval_g");
  return eval_f_squared(profile, eta) * eta;
}

/// Fourier transform of g with the unitary convention
/// g^(y) = (2 pi)^{-d/2} \int e^{-i y.eta} g(eta) d eta.
///
/// With G(y) = (s^2/2)^{d/2} e^{-i y.c} e^{-s^2 |y|^2 / 4} the transform of
/// |f|^2 / A^2, one has g^(y) = A^2 G(y) (c - i s^2 y / 2).
template <typename Scalar, typename Derived>
Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1> eval_g_hat(
    const Profile<Scalar>& profile, const Eigen::MatrixBase<Derived>& y) {
  detail::check_dimension(profile, y, "eval_g_hat");
  using Complex = std::complex<Scalar>;
  const Scalar s2 = profile.width() * profile.width();
  const Scalar a2 = profile.amplitude() * profile.amplitude();
  const Scalar magnitude = a2 * std::pow(s2 / 2, Scalar(profile.dimension()) / 2) *
                           std::exp(-s2 * y.squaredNorm() / 4);
  const Complex gauss = magnitude * std::exp(Complex(0, -y.dot(profile.center())));
  return gauss * (profile.center().template cast<Complex>() -
                  Complex(0, s2 / 2) * y.template cast<Complex>());
}

/// Proof constants derived from g.  Norms of vector-valued functions use the
/// pointwise Euclidean norm; the L^1 norm of the Jacobian of g^ uses the
/// pointwise Frobenius norm.
struct ConstantSet {
  int dimension = 0;
  double delta = 0;           ///< exponent slack used for C2_g's envelope
  double nu = 0;              ///< (d - 2) / 4
  double C_g = 0;             ///< \int |eta| |g(eta)| d eta
  double norm_g_L1 = 0;
  double norm_ghat_L1 = 0;
  double norm_ghat_prime_L1 = 0;
  double C1_g = 0;
  double C2_g = 0;
  double C3_g = 0;
  double C_d = 0;
};

/// Controls the numerical evaluation of the L^1 norms.  `refinement`
/// multiplies every node count; results are stable under doubling it.
struct ConstantsQuadrature {
  double tail_tolerance = 1e-14;
  int refinement = 1;
};

/// \int |eta|^2 |f|^2 in closed form: A^2 (pi s^2)^{d/2} (|c|^2 + d s^2 / 2).
double moment_constant(const Profile<double>& profile);

/// ||g||_{L^1}.  Radial profiles reduce to one radial integral; shifted ones
/// to a (radius, angle-to-c) integral.  Valid for any dimension >= 2.
double norm_g_L1(const Profile<double>& profile, const ConstantsQuadrature& quad = {});

/// ||g^||_{L^1} and ||Dg^||_{L^1}; both integrands depend on |y| only, even
/// for shifted profiles.
double norm_ghat_L1(const Profile<double>& profile, const ConstantsQuadrature& quad = {});
double norm_ghat_prime_L1(const Profile<double>& profile, const ConstantsQuadrature& quad = {});

/// 2 pi |S^{d-2}| \int_0^2 rho (2 rho - rho^2)^{(d-3)/2} d rho, the constant of
/// the comparison ODE for |xi|^2 in the limit equation.
double sphere_dissipation_constant(int dimension);

/// Radius L with \int_L^\infty rho^power e^{-rho^2/sigma^2} d rho below
/// tolerance times the full integral (Mills-ratio bound).
double gaussian_tail_radius(int power, double sigma, double tolerance);

/// All constants; requires d >= 3 and 0 < delta < (d - 2) / 4.
ConstantSet compute_constants(const Profile<double>& profile, double delta,
                              const ConstantsQuadrature& quad = {});

}  // namespace imde
