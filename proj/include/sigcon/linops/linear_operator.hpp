#pragma once

#include "sigcon/core/space_point.hpp"
#include "sigcon/linops/kernels.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace sigcon {

enum class LinopKind {
  identity,
  dense_matrix,
  circular_convolution_2d,
  finite_difference_1d,
  dct_2d,
  dictionary_rows,
  pair_sum,
  block_stack,
};

std::string_view to_string(LinopKind kind);

/// Implementation interface behind LinearOperator. Implementations are
/// immutable; apply/adjoint write into caller-provided buffers.
class LinearMap {
public:
  virtual ~LinearMap() = default;
  virtual LinopKind kind() const = 0;
  virtual void apply(std::span<const double> x, std::span<double> out) const = 0;
  virtual void adjoint(std::span<const double> y, std::span<double> out) const = 0;
  /// Exact squared operator norm when a closed form exists.
  virtual std::optional<double> closed_form_norm_sq() const { return std::nullopt; }
  /// Kind-specific parameters, for manifests and traces.
  virtual nlohmann::json parameters() const = 0;
};

/// Bounded linear map between block-structured spaces with an exact adjoint
/// and a certified upper bound on its squared norm.
class LinearOperator {
public:
  LinearOperator(std::shared_ptr<const LinearMap> map, Shape input, Shape output);

  LinopKind kind() const { return map_->kind(); }
  const Shape& input_shape() const { return input_; }
  const Shape& output_shape() const { return output_; }

  /// Certified upper bound on ||L||^2.
  double norm_sq() const { return norm_sq_; }

  SpacePoint apply(const SpacePoint& x) const;
  SpacePoint adjoint(const SpacePoint& y) const;

  void apply_to(std::span<const double> x, std::span<double> out) const {
    map_->apply(x, out);
  }
  void adjoint_to(std::span<const double> y, std::span<double> out) const {
    map_->adjoint(y, out);
  }

  const LinearMap& map() const { return *map_; }
  nlohmann::json to_json() const;

private:
  std::shared_ptr<const LinearMap> map_;
  Shape input_;
  Shape output_;
  double norm_sq_;
};

LinearOperator identity_operator(const Shape& shape);

/// y = A x with A given explicitly.
LinearOperator dense_matrix_operator(Eigen::MatrixXd matrix);

/// Periodic-boundary 2-D convolution on a rows x cols grid.
LinearOperator circular_convolution_2d(std::size_t rows, std::size_t cols,
                                       Kernel kernel);

/// (x_1..x_n) -> (x_2 - x_1, ..., x_n - x_{n-1}); requires n >= 2.
LinearOperator finite_difference_1d(std::size_t n);

/// Orthonormal type-II 2-D DCT on a rows x cols grid.
LinearOperator dct_2d(std::size_t rows, std::size_t cols);

/// x -> (<x, e_j>)_j where the e_j are the rows of `atoms`. The input shape
/// defaults to a vector of length atoms.cols().
LinearOperator dictionary_rows(Eigen::MatrixXd atoms);
LinearOperator dictionary_rows(Eigen::MatrixXd atoms, const Shape& input);

/// (x_1, x_2) -> x_1 + x_2 where both components have shape `component`.
LinearOperator pair_sum(const Shape& component);

/// Block-diagonal operator (x_1, ..., x_k) -> (L_1 x_1, ..., L_k x_k).
LinearOperator block_stack(std::vector<LinearOperator> parts);

struct PowerIterationResult {
  double rayleigh = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Power iteration for the largest eigenvalue of L*L, starting from a seeded
/// random vector; convergence is judged on successive Rayleigh quotients.
PowerIterationResult power_iteration(const LinearMap& map, const Shape& input,
                                     const Shape& output, int max_iters,
                                     double tol, std::uint64_t seed);

inline constexpr int kDefaultPowerIters = 200;
inline constexpr double kDefaultPowerTol = 1e-8;
inline constexpr double kNormSafetyFactor = 1.01;

/// Upper bound on ||L||^2. Closed forms are returned as is; otherwise the
/// power-iteration estimate is inflated by kNormSafetyFactor. If the
/// iteration does not settle within max_iters, a warning is emitted and the
/// trace of L*L is returned instead.
double estimate_norm_sq(const LinearMap& map, const Shape& input,
                        const Shape& output, int max_iters = kDefaultPowerIters,
                        double tol = kDefaultPowerTol, std::uint64_t seed = 0);
double estimate_norm_sq(const LinearOperator& op,
                        int max_iters = kDefaultPowerIters,
                        double tol = kDefaultPowerTol, std::uint64_t seed = 0);

} // namespace sigcon
