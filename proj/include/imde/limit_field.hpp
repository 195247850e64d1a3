#pragma once

#include <Eigen/Dense>

#include "imde/profile.hpp"

namespace imde {

/// Node counts for the resonance-sphere quadrature.  The polar coordinate
/// rho = 1 - cos(theta) is integrated with Gauss-Legendre in theta;
/// S^{d-2} uses equispaced azimuth nodes (d = 3) or a polar x azimuth product.
struct SphereQuadSpec {
  int rho_nodes = 64;
  int circle_nodes = 32;
};

/// Limit field F^(0)(u): -pi |u|^{d-1} times the integral of
/// eta |f(|u| eta)|^2 over the sphere u^ + S^{d-1}, parametrized by
/// eta = rho u^ + sqrt(2 rho - rho^2) omega', omega' in S^{d-2} orthogonal to u.
/// Requires u != 0 and d in {3, 4, 5}.
Eigen::VectorXd eval_F0(const Eigen::VectorXd& u, const Profile<double>& profile,
                        const SphereQuadSpec& squad = {});

/// lambda(|u|) >= 0 with F^(0)(u) = -lambda(|u|) u^ for radial profiles, from
/// the one-dimensional rho-integral.
double eval_F0_radial_coeff(double speed, const Profile<double>& profile,
                            const SphereQuadSpec& squad = {});

/// u . F^(0)(u); non-positive for every profile.
double dissipation(const Eigen::VectorXd& u, const Profile<double>& profile,
                   const SphereQuadSpec& squad = {});

/// d x (d-1) matrix whose columns complete u^ to an orthonormal basis: the
/// trailing columns of the Householder reflection mapping e_1 to u^.
Eigen::MatrixXd orthonormal_completion(const Eigen::VectorXd& unit);

}  // namespace imde
