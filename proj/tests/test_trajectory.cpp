#include <doctest.h>

#include <cmath>

#include "imde/errors.hpp"
#include "imde/trajectory.hpp"

using namespace imde;
using Eigen::Vector3d;
using Eigen::VectorXd;

namespace {
Trajectory linear(const Vector3d& v, double dt, int steps) {
  Trajectory path(dt, Vector3d::Zero());
  for (int k = 1; k <= steps; ++k) path.push_back(dt * k * v);
  return path;
}
}  // namespace

TEST_SUITE("trajectory") {

TEST_CASE("constant trajectory averages to itself") {
  const Vector3d v(0.3, -1.0, 2.0);
  Trajectory path(0.1, v);
  for (int k = 0; k < 10; ++k) path.push_back(v);
  CHECK(path.horizon() == doctest::Approx(1.0));
  for (double t : {0.0, 0.35, 1.0}) {
    for (double span : {0.0, std::min(0.05, t), t / 2, t}) {
      CHECK((running_average(path, t, span) - v).norm() < 1e-14);
    }
  }
}

TEST_CASE("linear trajectory is reproduced exactly") {
  const Vector3d v(1.0, 2.0, -0.5);
  const Trajectory path = linear(v, 1.0 / 8, 16);
  for (double t : {0.3, 1.0, 1.9, 2.0}) {
    CHECK((path.interpolate(t) - t * v).norm() < 1e-14);
    CHECK((path.integral_to(t) - t * t / 2 * v).norm() < 1e-14);
    for (double span : {0.01, 0.1, 0.29, t}) {
      CHECK((running_average(path, t, span) - (t - span / 2) * v).norm() < 1e-13);
    }
  }
}

TEST_CASE("prefix obeys the trapezoid rule bit for bit") {
  Trajectory path(0.01, Vector3d(1, 0, 0));
  for (int k = 1; k <= 50; ++k) {
    path.push_back(Vector3d(std::cos(k * 0.1), std::sin(k * 0.3), k * 0.01));
    if (k % 7 == 0) path.replace_back(Vector3d(0.5, -0.5, k * 0.02));
  }
  CHECK(path.prefix(0).norm() == 0.0);
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const VectorXd step = path.prefix(k) + path.dt() * (path.value(k) + path.value(k + 1)) / 2;
    CHECK((path.prefix(k + 1) - step).norm() == 0.0);
  }
}

TEST_CASE("window and dimension errors") {
  const Trajectory path = linear(Vector3d(1, 0, 0), 0.1, 10);
  CHECK_THROWS_AS(running_average(path, 0.5, 0.6), InputError);
  CHECK_THROWS_AS(running_average(path, 1.2, 0.1), InputError);
  CHECK_THROWS_AS(running_average(path, 0.5, -0.1), InputError);
  CHECK_THROWS_AS(path.interpolate(1.5), InputError);
  Trajectory single(0.1, Vector3d(1, 0, 0));
  CHECK_THROWS_AS(single.replace_back(Vector3d::Zero()), InputError);
  CHECK_THROWS_AS(single.push_back(Eigen::Vector2d::Zero()), InputError);
  CHECK_THROWS_AS(Trajectory(0.0, Vector3d::Zero()), InputError);
}

TEST_CASE("rounding at the horizon is tolerated") {
  const Trajectory path = linear(Vector3d(1, 0, 0), 0.1, 10);
  CHECK(path.covers(1.0 + 1e-14));
  CHECK_NOTHROW(running_average(path, 1.0 + 1e-14, 1.0));
}

}
