#include "imde/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "imde/errors.hpp"

namespace imde {

namespace {
double time_slack(double t) { return 1e-12 * std::max(1.0, std::abs(t)); }
}  // namespace

Trajectory::Trajectory(double dt, Eigen::VectorXd initial) : dt_(dt) {
  if (!(dt > 0)) throw InputError("Trajectory: dt must be > 0");
  if (initial.size() == 0) throw InputError("Trajectory: initial value must be non-empty");
  prefix_.push_back(Eigen::VectorXd::Zero(initial.size()));
  values_.push_back(std::move(initial));
}

void Trajectory::push_back(const Eigen::VectorXd& xi) {
  if (xi.size() != values_.front().size()) throw InputError("Trajectory: dimension mismatch");
  prefix_.push_back(prefix_.back() + dt_ * (values_.back() + xi) / 2);
  values_.push_back(xi);
}

void Trajectory::replace_back(const Eigen::VectorXd& xi) {
  if (values_.size() < 2) throw InputError("Trajectory: cannot replace the initial value");
  if (xi.size() != values_.front().size()) throw InputError("Trajectory: dimension mismatch");
  const std::size_t k = values_.size() - 1;
  values_[k] = xi;
  prefix_[k] = prefix_[k - 1] + dt_ * (values_[k - 1] + xi) / 2;
}

bool Trajectory::covers(double t) const {
  return t >= -time_slack(t) && t <= horizon() + time_slack(horizon());
}

Trajectory::Cell Trajectory::locate(double t) const {
  if (!covers(t)) {
    throw InputError("Trajectory: time " + std::to_string(t) + " outside [0, " +
                     std::to_string(horizon()) + "]");
  }
  if (values_.size() == 1) return {0, 0.0};
  const double scaled = std::clamp(t / dt_, 0.0, static_cast<double>(values_.size() - 1));
  const std::size_t index = std::min(static_cast<std::size_t>(scaled), values_.size() - 2);
  return {index, std::clamp(scaled - static_cast<double>(index), 0.0, 1.0)};
}

Eigen::VectorXd Trajectory::interpolate(double t) const {
  const Cell cell = locate(t);
  if (values_.size() == 1) return values_.front();
  return (1 - cell.fraction) * values_[cell.index] + cell.fraction * values_[cell.index + 1];
}

Eigen::VectorXd Trajectory::integral_to(double t) const {
  const Cell cell = locate(t);
  if (values_.size() == 1) return prefix_.front();
  const double theta = cell.fraction;
  const Eigen::VectorXd& left = values_[cell.index];
  const Eigen::VectorXd& right = values_[cell.index + 1];
  return prefix_[cell.index] + dt_ * (theta * left + theta * theta / 2 * (right - left));
}

Eigen::VectorXd running_average(const Trajectory& trajectory, double t, double span) {
  if (!(span >= 0)) throw InputError("running_average: span must be >= 0");
  const double start = t - span;
  if (!trajectory.covers(start) || !trajectory.covers(t)) {
    throw InputError("running_average: window [" + std::to_string(start) + ", " +
                     std::to_string(t) + "] outside the trajectory [0, " +
                     std::to_string(trajectory.horizon()) + "]");
  }
  if (span == 0) return trajectory.interpolate(t);
  // Inside one cell the reconstruction is linear and its mean is the value at
  // the midpoint; this avoids differencing nearly equal prefix integrals.
  const double dt = trajectory.dt();
  const double last_cell = std::max(0.0, static_cast<double>(trajectory.size()) - 2);
  const double cell_start = std::min(std::floor(std::max(start, 0.0) / dt), last_cell);
  const double cell_end = std::min(std::ceil(t / dt - 1e-12), last_cell + 1);
  if (cell_end - cell_start <= 1) return trajectory.interpolate(t - span / 2);
  return (trajectory.integral_to(t) - trajectory.integral_to(start)) / span;
}

}  // namespace imde
