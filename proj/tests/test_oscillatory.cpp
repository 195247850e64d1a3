#include <doctest.h>

#include <cmath>
#include <random>

#include "imde/integrators.hpp"
#include "imde/limit_field.hpp"
#include "imde/oscillatory.hpp"
#include "oracles.hpp"

using namespace imde;
using Eigen::Vector3d;
using Eigen::VectorXd;

namespace {
Profile<double> baseline() { return Profile<double>::centered(3, 1.0, 1.0); }
Profile<double> shifted() { return Profile<double>(3, 1.3, Vector3d(0.4, -0.2, 0.3), 0.8); }
}  // namespace

TEST_SUITE("oscillatory") {

TEST_CASE("phase") {
  const Vector3d u(0.3, -0.7, 1.1);
  CHECK(phase(Vector3d::Zero(), u) == 0.0);
  CHECK(phase((2 * u).eval(), u) == doctest::Approx(0).scale(1));
  CHECK(phase(Vector3d(1, 0, 0), Vector3d(0, 1, 0)) == 1.0);
}

TEST_CASE("sinc kernel") {
  CHECK(sinc_kernel(3.0, 0.0) == 3.0);
  CHECK(sinc_kernel(2.0, 0.5) == doctest::Approx(std::sin(1.0) / 0.5).epsilon(1e-15));
  // Both sides of the switch agree.
  const double below = sinc_kernel(1.0, 0.99e-4), above = sinc_kernel(1.0, 1.01e-4);
  CHECK(below == doctest::Approx(std::sin(0.99e-4) / 0.99e-4).epsilon(1e-15));
  CHECK(above == doctest::Approx(std::sin(1.01e-4) / 1.01e-4).epsilon(1e-15));
}

TEST_CASE("phase moment at r = 0 is the integral of g") {
  const Profile<double> p = shifted();
  const double mass = std::pow(std::numbers::pi * p.width() * p.width(), 1.5) * 1.69;
  const Eigen::VectorXcd m = gaussian_phase_moment(p, 0.0, Vector3d(1, 2, 3));
  CHECK((m.real() - mass * p.center()).norm() < 1e-13);
  CHECK(m.imag().norm() < 1e-15);
}

TEST_CASE("zero amplitude") {
  const auto p = Profile<double>::centered(3, 0.0, 1.0);
  CHECK(eval_F_h_frozen(Vector3d(1, 0, 0), 1.0, 0.1, p).norm() == 0.0);
}

TEST_CASE("frozen field against the brute-force double integral") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> unit(-1, 1), ratio(1, 6);
  for (const auto& profile : {baseline(), shifted()}) {
    const Vector3d u(unit(rng), unit(rng), unit(rng));
    const double h = 0.2, t = h * ratio(rng);
    const VectorXd fast = eval_F_h_frozen(u, t, h, profile);
    const VectorXd slow = oracle::frozen_field(profile, u, t, h);
    CHECK((fast - slow).norm() <= 1e-6 * slow.norm());
  }
}

TEST_CASE("sinc route agrees with the closed-form route") {
  const Vector3d u(0.6, 0.2, -0.3);
  for (const auto& profile : {baseline(), shifted()}) {
    const VectorXd closed = eval_F_h_frozen(u, 1.0, 0.5, profile);
    const VectorXd tensor = eval_F_h_frozen_tensor(u, 1.0, 0.5, profile, {.eta_nodes_per_axis = 128});
    CHECK((closed - tensor).norm() <= 1e-9 * closed.norm());
  }
}

TEST_CASE("trivial modulus bound and the uniform bound 2 C1") {
  const Profile<double> p = baseline();
  const ConstantSet c = compute_constants(p, 0.05);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> unit(-1.5, 1.5), ratio(1, 40), hs(0.02, 0.5);
  for (int i = 0; i < 100; ++i) {
    const Vector3d u(unit(rng), unit(rng), unit(rng));
    const double h = hs(rng), t = h * ratio(rng);
    const double norm = eval_F_h_frozen(u, t, h, p).norm();
    CHECK(norm <= 2 * c.C1_g);
    CHECK(norm < 2 * (t / h) * c.norm_g_L1);
  }
}

TEST_CASE("large t/h: parallel to u and close to the limit field") {
  const Profile<double> p = baseline();
  const ConstantSet c = compute_constants(p, 0.05);
  const Vector3d u(1, 0, 0);
  const double h = 0.02, t = 1.0;
  const VectorXd F = eval_F_h_frozen(u, t, h, p);
  CHECK(std::hypot(F[1], F[2]) <= 1e-8 * F.norm());
  CHECK((F - eval_F0(u, p)).norm() <= c.C3_g * std::sqrt(h / t));
}

TEST_CASE("odd in u for radial profiles") {
  const Vector3d u(0.4, -0.9, 0.2);
  const VectorXd a = eval_F_h_frozen(u, 0.7, 0.1, baseline());
  const VectorXd b = eval_F_h_frozen((-u).eval(), 0.7, 0.1, baseline());
  CHECK((a + b).norm() <= 1e-14 * a.norm());
}

TEST_CASE("resolution convergence") {
  const QuadratureSpec base;
  QuadratureSpec fine = base;
  fine.r_order *= 2;
  fine.r_panel_length /= 2;
  for (const auto& profile : {baseline(), shifted()}) {
    for (double ratio : {1.0, 7.0, 40.0}) {
      const Vector3d u(0.8, 0.1, -0.2);
      const VectorXd a = eval_F_h_frozen(u, ratio * 0.1, 0.1, profile, base);
      const VectorXd b = eval_F_h_frozen(u, ratio * 0.1, 0.1, profile, fine);
      CHECK((a - b).norm() < 10 * base.tail_tolerance);
    }
  }
}

TEST_CASE("memory field") {
  const Profile<double> p = baseline();
  const Vector3d u(0.7, 0.3, 0);
  Trajectory constant(1.0 / 64, u);
  for (int k = 0; k < 64; ++k) constant.push_back(u);

  CHECK(eval_memory_field(constant, 0.0, 0.1, p).norm() == 0.0);
  for (double t : {0.05, 0.5, 1.0}) {
    const VectorXd memory = eval_memory_field(constant, t, 0.1, p);
    const VectorXd frozen = eval_F_h_frozen(u, t, 0.1, p);
    CHECK((memory - frozen).norm() <= 1e-9 * frozen.norm());
  }
  CHECK_THROWS_AS(eval_memory_field(constant, 1.5, 0.1, p), InputError);
  CHECK_THROWS_AS(eval_memory_field(constant, 0.5, 0.0, p), InputError);
  CHECK_THROWS_AS(eval_F_h_frozen(u, 0.0, 0.1, p), InputError);
  CHECK_THROWS_AS(eval_F_h_frozen(u, 1.0, -0.1, p), InputError);
}

TEST_CASE("memory field stays within the second lemma envelope on a short solve") {
  SolverConfig config;
  config.h = 0.1;
  config.T = 0.25;
  const SolveResult run = solve_memory(config);
  const ConstantSet c = compute_constants(config.profile, 0.05);
  const double envelope = c.C2_g * std::pow(0.1, c.nu - c.delta);
  for (double t : {0.05, 0.1, 0.2, 0.25}) {
    const VectorXd memory = eval_memory_field(run.trajectory, t, 0.1, config.profile);
    const VectorXd frozen = eval_F_h_frozen(run.trajectory.interpolate(t), t, 0.1, config.profile);
    CHECK((memory - frozen).norm() <= envelope);
  }
}

}
