#pragma once

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <limits>
#include <stdexcept>
#include <type_traits>
#include <utility>

#include <Eigen/Dense>

namespace imde {

template <typename Scalar>
struct QuadratureRule {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> nodes;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> weights;

  Eigen::Index size() const { return nodes.size(); }
};

/// Gauss-Legendre rule of the given order on [-1, 1].  Nodes are the roots of
/// P_n found by Newton iteration from the Chebyshev-like initial guess.
template <typename Scalar = double>
QuadratureRule<Scalar> gauss_legendre(int order) {
  if (order < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  QuadratureRule<Scalar> rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const Scalar pi = std::numbers::pi_v<Scalar>;
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    Scalar x = std::cos(pi * (Scalar(i) + Scalar(0.75)) / (Scalar(order) + Scalar(0.5)));
    Scalar dp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      Scalar p0 = 1, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const Scalar p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1);
      const Scalar step = p1 / dp;
      x -= step;
      if (std::abs(step) <= 4 * eps) break;
    }
    // Recompute the derivative at the converged root.
    Scalar p0 = 1, p1 = x;
    for (int k = 2; k <= order; ++k) {
      const Scalar p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = order * (x * p1 - p0) / (x * x - 1);
    const Scalar w = 2 / ((1 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0;
  return rule;
}

/// Process-wide cache of double-precision rules; safe to call concurrently.
inline const QuadratureRule<double>& gauss_legendre_cached(int order) {
  static std::mutex mutex;
  static std::map<int, QuadratureRule<double>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, gauss_legendre<double>(order)).first;
  return it->second;
}

namespace detail {
template <typename T, typename = void>
struct plain_type {
  using type = T;
};
template <typename T>
struct plain_type<T, std::void_t<typename T::PlainObject>> {
  using type = typename T::PlainObject;
};
}  // namespace detail

/// Composite Gauss-Legendre quadrature of f over [a, b] split into `panels`
/// equal panels.  f may return a scalar or an Eigen expression.
template <typename Scalar, typename F>
auto integrate_composite(F&& f, Scalar a, Scalar b, int panels,
                         const QuadratureRule<Scalar>& rule) {
  const Scalar width = (b - a) / Scalar(panels);
  const Scalar half = width / 2;
  using Result = std::decay_t<decltype(Scalar(1) * f(a))>;
  using Value = typename detail::plain_type<Result>::type;
  Value sum = half * rule.weights[0] * f(a + half * (rule.nodes[0] + 1));
  for (int p = 0; p < panels; ++p) {
    const Scalar mid = a + width * p + half;
    for (Eigen::Index i = (p == 0 ? 1 : 0); i < rule.size(); ++i) {
      sum += half * rule.weights[i] * f(mid + half * rule.nodes[i]);
    }
  }
  return sum;
}

/// Surface area of the unit sphere S^k in R^{k+1}.
template <typename Scalar = double>
Scalar sphere_area(int k) {
  const Scalar pi = std::numbers::pi_v<Scalar>;
  const Scalar half = Scalar(k + 1) / 2;
  return 2 * std::pow(pi, half) / std::tgamma(half);
}

/// Points and weights on S^k in R^{k+1} (k >= 1).  S^1 uses equispaced nodes;
/// higher spheres are built recursively as (cos t, sin t * p) with p on
/// S^{k-1}, Gauss-Legendre in t and the sin^{k-1} t factor folded into the
/// weights.  Weights sum to the surface area.
template <typename Scalar = double>
std::pair<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>,
          Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>
sphere_rule(int k, int polar_nodes, int azimuth_nodes) {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  if (k < 1) throw std::invalid_argument("sphere_rule: k must be >= 1");
  const Scalar pi = std::numbers::pi_v<Scalar>;
  if (k == 1) {
    Matrix points(2, azimuth_nodes);
    Vector weights = Vector::Constant(azimuth_nodes, 2 * pi / azimuth_nodes);
    for (int j = 0; j < azimuth_nodes; ++j) {
      const Scalar phi = 2 * pi * j / azimuth_nodes;
      points(0, j) = std::cos(phi);
      points(1, j) = std::sin(phi);
    }
    return {points, weights};
  }
  auto [sub_points, sub_weights] = sphere_rule<Scalar>(k - 1, polar_nodes, azimuth_nodes);
  const auto gl = gauss_legendre<Scalar>(polar_nodes);
  const Eigen::Index m = sub_points.cols();
  Matrix points(k + 1, polar_nodes * m);
  Vector weights(polar_nodes * m);
  for (int i = 0; i < polar_nodes; ++i) {
    const Scalar theta = pi / 2 * (gl.nodes[i] + 1);
    const Scalar w = pi / 2 * gl.weights[i] * std::pow(std::sin(theta), k - 1);
    for (Eigen::Index j = 0; j < m; ++j) {
      const Eigen::Index col = i * m + j;
      points(0, col) = std::cos(theta);
      points.col(col).tail(k) = std::sin(theta) * sub_points.col(j);
      weights[col] = w * sub_weights[j];
    }
  }
  return {points, weights};
}

}  // namespace imde
