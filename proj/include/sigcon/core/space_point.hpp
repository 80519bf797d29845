#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace sigcon {

/// One block of a (possibly product) space. A grid block is a rows x cols
/// array stored row-major; a plain vector block has cols == 1 and grid false.
struct Block {
  std::size_t rows = 0;
  std::size_t cols = 1;
  bool grid = false;

  std::size_t size() const { return rows * cols; }
  friend bool operator==(const Block&, const Block&) = default;
};

/// Block layout of a point in a finite-dimensional real Hilbert space.
/// Product spaces are shapes with more than one block.
class Shape {
public:
  Shape() = default;
  explicit Shape(std::vector<Block> blocks);

  static Shape vector(std::size_t n);
  static Shape grid(std::size_t rows, std::size_t cols);
  /// Concatenates the blocks of `parts`, in order.
  static Shape product(const std::vector<Shape>& parts);

  const std::vector<Block>& blocks() const { return blocks_; }
  std::size_t block_count() const { return blocks_.size(); }
  const Block& block(std::size_t k) const { return blocks_.at(k); }
  std::size_t block_offset(std::size_t k) const { return offsets_.at(k); }
  std::size_t size() const { return total_; }

  /// A shape with a single grid block.
  bool is_single_grid() const { return blocks_.size() == 1 && blocks_[0].grid; }

  std::string to_string() const;

  friend bool operator==(const Shape& a, const Shape& b) {
    return a.blocks_ == b.blocks_;
  }

private:
  std::vector<Block> blocks_;
  std::vector<std::size_t> offsets_;
  std::size_t total_ = 0;
};

/// Throws ShapeMismatch with `context` unless `a == b`.
void require_same_shape(const Shape& a, const Shape& b, const char* context);

/// An element of a Euclidean space with block metadata. Values are immutable
/// once constructed; construction from external data rejects NaN and Inf.
class SpacePoint {
public:
  SpacePoint(Shape shape, std::vector<double> values);

  static SpacePoint zeros(const Shape& shape);
  static SpacePoint constant(const Shape& shape, double value);
  static SpacePoint vector(std::vector<double> values);
  static SpacePoint grid(std::size_t rows, std::size_t cols,
                         std::vector<double> values);

  /// Wraps already-computed values without the finiteness scan. Used on hot
  /// paths where the values come from arithmetic on valid points.
  static SpacePoint unchecked(Shape shape, std::vector<double> values);

  const Shape& shape() const { return shape_; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> block(std::size_t k) const;

  /// Copy of the raw values, for callers that need to build a modified point.
  std::vector<double> to_vector() const { return values_; }

  double norm() const;
  double squared_norm() const;
  bool all_finite() const;

  friend SpacePoint operator+(const SpacePoint& a, const SpacePoint& b);
  friend SpacePoint operator-(const SpacePoint& a, const SpacePoint& b);
  friend SpacePoint operator*(double s, const SpacePoint& a);
  friend double dot(const SpacePoint& a, const SpacePoint& b);
  friend double distance(const SpacePoint& a, const SpacePoint& b);

private:
  struct NoCheck {};
  SpacePoint(Shape shape, std::vector<double> values, NoCheck);

  Shape shape_;
  std::vector<double> values_;
};

/// `s*x + y`.
SpacePoint axpy(double s, const SpacePoint& x, const SpacePoint& y);

// Span-level helpers shared by the operator implementations.
double dot(std::span<const double> a, std::span<const double> b);
double squared_norm(std::span<const double> a);

} // namespace sigcon
