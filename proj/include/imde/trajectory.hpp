#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace imde {

/// Uniform-step history of a vector-valued solution with prefix integrals.
///
/// Between nodes the solution is reconstructed linearly; prefix(k) is the
/// exact integral of that reconstruction over [0, k dt], maintained by the
/// trapezoid update prefix(k+1) = prefix(k) + dt (xi_k + xi_{k+1}) / 2.
class Trajectory {
 public:
  Trajectory(double dt, Eigen::VectorXd initial);

  double dt() const { return dt_; }
  std::size_t size() const { return values_.size(); }
  int dimension() const { return static_cast<int>(values_.front().size()); }
  double time(std::size_t k) const { return dt_ * static_cast<double>(k); }
  /// Last covered time.
  double horizon() const { return time(size() - 1); }

  const Eigen::VectorXd& value(std::size_t k) const { return values_[k]; }
  const Eigen::VectorXd& prefix(std::size_t k) const { return prefix_[k]; }
  const Eigen::VectorXd& back() const { return values_.back(); }
  const std::vector<Eigen::VectorXd>& values() const { return values_; }

  void push_back(const Eigen::VectorXd& xi);
  /// Overwrites the newest node (and its prefix); used by fixed-point sweeps.
  void replace_back(const Eigen::VectorXd& xi);

  /// Linear reconstruction at time t in [0, horizon()].
  Eigen::VectorXd interpolate(double t) const;
  /// \int_0^t of the linear reconstruction.
  Eigen::VectorXd integral_to(double t) const;

  /// True when t lies in [0, horizon()] up to rounding.
  bool covers(double t) const;

 private:
  struct Cell {
    std::size_t index;
    double fraction;
  };
  Cell locate(double t) const;

  double dt_;
  std::vector<Eigen::VectorXd> values_;
  std::vector<Eigen::VectorXd> prefix_;
};

/// Mean of the solution over [t - span, t]; span = 0 gives the value at t.
Eigen::VectorXd running_average(const Trajectory& trajectory, double t, double span);

}  // namespace imde
