#include <doctest.h>

#include <cmath>

#include "imde/analysis.hpp"
#include "imde/integrators.hpp"

using namespace imde;
using Eigen::Vector3d;
using Eigen::VectorXd;

namespace {
double sup_distance(const Trajectory& a, const Trajectory& b, std::size_t stride) {
  double out = 0;
  for (std::size_t k = 0; k < a.size(); ++k) out = std::max(out, (a.value(k) - b.value(stride * k)).norm());
  return out;
}

// Rotation plus damping: xi' = M xi with a known matrix exponential.
Eigen::Matrix3d damped_rotation() {
  Eigen::Matrix3d M;
  M << -0.5, 2, 0, -2, -0.5, 0, 0, 0, -1;
  return M;
}

Vector3d exact_rotation(double t) {
  return std::exp(-0.5 * t) * Vector3d(std::cos(2 * t), -std::sin(2 * t), 0) +
         Vector3d(0, 0, std::exp(-t));
}
}  // namespace

TEST_SUITE("integrators") {

TEST_CASE("zero amplitude keeps xi0 for both solvers") {
  SolverConfig config;
  config.profile = Profile<double>::centered(3, 0.0, 1.0);
  config.xi0 = Vector3d(0.3, -0.4, 1.2);
  config.T = 0.5;
  for (double dt : {0.1, 1.0 / 64}) {
    config.dt = dt;
    config.h.reset();
    const SolveResult limit = solve_limit(config);
    config.h = 0.1;
    const SolveResult memory = solve_memory(config);
    for (const auto* run : {&limit, &memory}) {
      CHECK_FALSE(run->truncated);
      for (const auto& xi : run->trajectory.values()) CHECK((xi - config.xi0).norm() == 0.0);
    }
    CHECK(memory.warnings.empty());
  }
}

TEST_CASE("baseline limit run keeps its direction and loses norm") {
  SolverConfig config;
  const SolveResult run = solve_limit(config);
  CHECK_FALSE(run.truncated);
  CHECK(run.trajectory.size() == 257);
  CHECK(strictly_decreasing_norm(run.trajectory));
  for (const auto& xi : run.trajectory.values()) {
    CHECK((xi.normalized() - config.xi0).norm() < 1e-9);
  }
}

TEST_CASE("limit solver is fourth order on the baseline") {
  SolverConfig config;
  config.T = 0.5;
  std::vector<Trajectory> runs;
  for (double dt : {1.0 / 32, 1.0 / 64, 1.0 / 128}) {
    config.dt = dt;
    runs.push_back(solve_limit(config).trajectory);
  }
  const double coarse = sup_distance(runs[0], runs[1], 2);
  const double fine = sup_distance(runs[1], runs[2], 2);
  CHECK(coarse / fine > 12);
  CHECK(coarse / fine < 20);
}

TEST_CASE("rk4 order on a manufactured right-hand side") {
  const Eigen::Matrix3d M = damped_rotation();
  auto field = [&](const VectorXd& u) -> VectorXd { return M * u; };
  double previous = 0;
  for (int n : {20, 40, 80}) {
    const SolveResult run = integrate_rk4(field, exact_rotation(0), 2.0 / n, n);
    const double error = (run.trajectory.back() - exact_rotation(2.0)).norm();
    if (previous > 0) {
      CHECK(previous / error > 14);
      CHECK(previous / error < 18);
    }
    previous = error;
  }
}

TEST_CASE("predictor-corrector is second order on local and history fields") {
  const Eigen::Matrix3d M = damped_rotation();
  auto local = [&](const Trajectory& path, double t) -> VectorXd { return M * path.interpolate(t); };
  // xi'' = -xi with xi(0) = e1, xi'(0) = 0, written as xi' = -\int_0^t xi.
  auto history = [](const Trajectory& path, double t) -> VectorXd { return -path.integral_to(t); };
  double previous_local = 0, previous_history = 0;
  for (int n : {32, 64, 128}) {
    const SolveResult a = integrate_predictor_corrector(local, exact_rotation(0), 2.0 / n, n, 1e-14, 100);
    const SolveResult b = integrate_predictor_corrector(history, Vector3d(1, 0, 0), 2.0 / n, n, 1e-14, 100);
    const double ea = (a.trajectory.back() - exact_rotation(2.0)).norm();
    const double eb = std::abs(b.trajectory.back()[0] - std::cos(2.0));
    if (previous_local > 0) {
      CHECK(previous_local / ea == doctest::Approx(4).epsilon(0.1));
      CHECK(previous_history / eb == doctest::Approx(4).epsilon(0.1));
    }
    previous_local = ea;
    previous_history = eb;
  }
}

TEST_CASE("memory solve at h = 0.2 respects the derivative bound") {
  SolverConfig config;
  config.h = 0.2;
  const SolveResult run = solve_memory(config);
  const ConstantSet c = compute_constants(config.profile, 0.05);
  CHECK(run.trajectory.size() == 257);
  CHECK(run.max_fixed_point_iterations <= 10);
  CHECK(check_derivative_bound(run.trajectory, c, 0.0).passed());
  // The contraction window is far smaller than dt (T + dt) here.
  REQUIRE(run.warnings.size() == 1);
  CHECK(run.warnings[0].find("contraction window") != std::string::npos);
  // Prefix integrals follow the trapezoid rule exactly.
  const Trajectory& path = run.trajectory;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const VectorXd step = path.prefix(k) + path.dt() * (path.value(k) + path.value(k + 1)) / 2;
    CHECK((path.prefix(k + 1) - step).norm() == 0.0);
  }
}

TEST_CASE("memory solver converges at second order in dt") {
  SolverConfig config;
  config.h = 0.2;
  config.T = 0.5;
  std::vector<Trajectory> runs;
  for (double dt : {1.0 / 32, 1.0 / 64, 1.0 / 128}) {
    config.dt = dt;
    runs.push_back(solve_memory(config).trajectory);
  }
  const double coarse = sup_distance(runs[0], runs[1], 2);
  const double fine = sup_distance(runs[1], runs[2], 2);
  CHECK(coarse / fine > 3);
  CHECK(coarse / fine < 5.5);
}

TEST_CASE("fixed-point failure carries the partial history") {
  SolverConfig config;
  config.h = 0.1;
  config.T = 0.1;
  config.fp_max_iter = 1;
  config.fp_tol = 1e-300;
  try {
    solve_memory(config);
    FAIL("expected FixedPointError");
  } catch (const FixedPointError& e) {
    CHECK(e.step() == 1);
    CHECK(e.iterations() == 1);
    CHECK(e.residual() > 0);
    CHECK(e.partial().trajectory.size() == 1);
  }
}

TEST_CASE("limit solver truncates near the singular point") {
  // |xi| = e^{-t} crosses the floor 1e-6 at t = 6 ln 10.
  auto field = [](const VectorXd& u) -> VectorXd { return -u; };
  const SolveResult run = integrate_rk4(field, Vector3d(1, 0, 0), 0.1, 200, 1e-6);
  CHECK(run.truncated);
  CHECK(run.trajectory.horizon() == doctest::Approx(13.8));
  CHECK(run.field.size() == run.trajectory.size());
  CHECK(run.diagnostic.find("truncated") != std::string::npos);

  auto singular = [](const VectorXd& u) -> VectorXd {
    if (u.norm() < 0.5) throw SingularInput("too close");
    return -u.normalized();
  };
  const SolveResult cut = integrate_rk4(singular, Vector3d(1, 0, 0), 0.01, 200);
  CHECK(cut.truncated);
  CHECK(cut.field.size() == cut.trajectory.size());
}

TEST_CASE("config validation") {
  SolverConfig config;
  CHECK_NOTHROW(validate(config));
  CHECK(config.steps() == 256);
  CHECK(config.resolved_fp_tol() == doctest::Approx(2e-10));
  SolverConfig bad = config;
  bad.xi0 = Vector3d::Zero();
  CHECK_THROWS_AS(validate(bad), InputError);
  bad = config;
  bad.dt = 2;
  CHECK_THROWS_AS(validate(bad), InputError);
  bad = config;
  bad.h = 0.0;
  CHECK_THROWS_AS(validate(bad), InputError);
  bad = config;
  bad.profile = Profile<double>::centered(2, 1.0, 1.0);
  bad.xi0 = Eigen::Vector2d(1, 0);
  CHECK_THROWS_AS(validate(bad), UnsupportedDimension);
  CHECK_THROWS_AS(solve_memory(config), InputError);  // no h
}

}
