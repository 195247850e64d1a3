#pragma once

#include <complex>

#include <Eigen/Dense>

#include "imde/profile.hpp"
#include "imde/trajectory.hpp"

namespace imde {

/// Discretization of the eta- and r-integrals of the memory and frozen fields.
struct QuadratureSpec {
  /// Half-width of the eta box for the tensor route; 0 selects the certified
  /// radius from tail_tolerance.
  double eta_radius = 0;
  /// Gauss-Legendre nodes per axis for the tensor route (panels of order 8).
  int eta_nodes_per_axis = 64;
  /// Gauss-Legendre nodes in each r-piece between history crossings.
  int r_substeps_per_history_step = 4;
  double tail_tolerance = 1e-12;
  /// r-pieces longer than this are split further.
  double r_panel_length = 0.25;
  /// Gauss-Legendre order per r-panel of the frozen field.
  int r_order = 8;
};

/// phi(eta; u) = |eta|^2 - 2 eta.u; zero on the sphere |eta - u| = |u|.
template <typename DerivedA, typename DerivedB>
auto phase(const Eigen::MatrixBase<DerivedA>& eta, const Eigen::MatrixBase<DerivedB>& u) {
  return eta.squaredNorm() - 2 * eta.dot(u);
}

/// M(r, v) = \int e^{-i r phi(eta; v)} g(eta) d eta in closed form.
///
/// With a = 1/s^2 + i r and b = 2 i r v + 2 c / s^2 the integrand is a
/// complex Gaussian:  M = A^2 (pi/a)^{d/2} exp(b.b/(4a) - |c|^2/s^2) b/(2a).
/// |M| decays like r^{-d/2}.
Eigen::VectorXcd gaussian_phase_moment(const Profile<double>& profile, double r,
                                       const Eigen::VectorXd& v);

/// Box half-width (around c) outside which |g| carries less than `tolerance`
/// of its L^1 mass.
double certified_eta_radius(const Profile<double>& profile, double tolerance);

/// Frozen field F^(h)(u)(t) = -2 Re \int_0^{t/h} M(r, u) dr.
Eigen::VectorXd eval_F_h_frozen(const Eigen::VectorXd& u, double t, double h,
                                const Profile<double>& profile, const QuadratureSpec& quad = {});

/// The same field through the exact r-integral,
/// -2 \int sin(R phi)/phi g(eta) d eta with R = t/h, by tensor Gauss-Legendre
/// on the truncated eta box.  Works for any profile but costs
/// eta_nodes_per_axis^d evaluations and needs the grid to resolve R.
Eigen::VectorXd eval_F_h_frozen_tensor(const Eigen::VectorXd& u, double t, double h,
                                       const Profile<double>& profile,
                                       const QuadratureSpec& quad = {});

/// sin(R phi) / phi, switching to R (1 - (R phi)^2 / 6) when |R phi| < 1e-4.
double sinc_kernel(double R, double phi);

/// Memory field at time t along the history:
/// -2 Re \int_0^{t/h} M(r, avg_{[t - h r, t]} xi) dr, with r-pieces split at
/// the history grid crossings t - h r = k dt.
Eigen::VectorXd eval_memory_field(const Trajectory& trajectory, double t, double h,
                                  const Profile<double>& profile, const QuadratureSpec& quad = {});

}  // namespace imde
