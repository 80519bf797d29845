#pragma once

#include "sigcon/core/random.hpp"
#include "sigcon/core/space_point.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace sigcon::testing {

/// Seeded source of random test inputs. Each property test owns one.
class Gen {
public:
  explicit Gen(std::uint64_t seed, std::uint64_t stream = 900) : rng_(seed, stream) {}

  double uniform(double lo, double hi) { return rng_.uniform(lo, hi); }
  double normal() { return rng_.normal(); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(rng_.below(n)); }
  bool coin() { return rng_.below(2) == 1; }

  /// Mixed-scale entries: mostly N(0, s^2), sometimes exact zeros, ties or
  /// large values, so that kinks of piecewise maps get hit.
  std::vector<double> values(std::size_t n, double scale = 1.0) {
    std::vector<double> v(n);
    for (auto& x : v) {
      switch (rng_.below(8)) {
      case 0: x = 0.0; break;
      case 1: x = 50.0 * scale * rng_.normal(); break;
      case 2: x = scale * (rng_.below(5) - 2.0); break;
      default: x = scale * rng_.normal();
      }
    }
    return v;
  }

  SpacePoint point(const Shape& shape, double scale = 1.0) {
    return SpacePoint(shape, values(shape.size(), scale));
  }

  /// A point near `x`, to probe local behaviour.
  SpacePoint nearby(const SpacePoint& x, double radius) {
    auto v = x.to_vector();
    for (auto& e : v) e += radius * rng_.normal();
    return SpacePoint(x.shape(), std::move(v));
  }

  Eigen::MatrixXd matrix(Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = rng_.normal();
    return m;
  }

  /// Random matrix with prescribed singular values.
  Eigen::MatrixXd matrix_with_singular_values(Eigen::Index rows, Eigen::Index cols,
                                              const std::vector<double>& sv) {
    auto q1 = Eigen::HouseholderQR<Eigen::MatrixXd>(matrix(rows, rows)).householderQ() *
              Eigen::MatrixXd::Identity(rows, rows);
    auto q2 = Eigen::HouseholderQR<Eigen::MatrixXd>(matrix(cols, cols)).householderQ() *
              Eigen::MatrixXd::Identity(cols, cols);
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(rows, cols);
    for (std::size_t k = 0; k < sv.size(); ++k)
      s(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = sv[k];
    return q1 * s * q2.transpose();
  }

  /// Random shape: a vector, a grid or a product of both.
  Shape shape() {
    switch (rng_.below(3)) {
    case 0: return Shape::vector(1 + index(12));
    case 1: return Shape::grid(2 + index(6), 2 + index(6));
    default: return Shape::product({Shape::vector(1 + index(6)), Shape::grid(2 + index(4), 3)});
    }
  }

private:
  CounterRng rng_;
};

inline SpacePoint from_matrix(const Eigen::MatrixXd& m) {
  std::vector<double> v(static_cast<std::size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      v[static_cast<std::size_t>(r * m.cols() + c)] = m(r, c);
  return SpacePoint::grid(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()),
                          std::move(v));
}

inline Eigen::MatrixXd to_matrix(const SpacePoint& x) {
  const auto& b = x.shape().block(0);
  Eigen::MatrixXd m(b.rows, b.cols);
  for (std::size_t r = 0; r < b.rows; ++r)
    for (std::size_t c = 0; c < b.cols; ++c) m(r, c) = x[r * b.cols + c];
  return m;
}

inline Eigen::VectorXd to_eigen(const SpacePoint& x) {
  Eigen::VectorXd v(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) v(k) = x[k];
  return v;
}

inline SpacePoint from_eigen(const Eigen::VectorXd& v) {
  return SpacePoint::vector(std::vector<double>(v.data(), v.data() + v.size()));
}

} // namespace sigcon::testing
