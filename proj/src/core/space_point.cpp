#include "sigcon/core/space_point.hpp"

#include "sigcon/core/errors.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace sigcon {

Shape::Shape(std::vector<Block> blocks) : blocks_(std::move(blocks)) {
  offsets_.reserve(blocks_.size());
  for (const auto& b : blocks_) {
    if (b.size() == 0) throw InvalidParameter("shape block must be nonempty");
    offsets_.push_back(total_);
    total_ += b.size();
  }
  if (total_ == 0) throw InvalidParameter("shape must have positive size");
}

Shape Shape::vector(std::size_t n) { return Shape({Block{n, 1, false}}); }

Shape Shape::grid(std::size_t rows, std::size_t cols) {
  return Shape({Block{rows, cols, true}});
}

Shape Shape::product(const std::vector<Shape>& parts) {
  std::vector<Block> blocks;
  for (const auto& p : parts)
    blocks.insert(blocks.end(), p.blocks().begin(), p.blocks().end());
  return Shape(std::move(blocks));
}

std::string Shape::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    if (k) os << ", ";
    if (blocks_[k].grid)
      os << blocks_[k].rows << 'x' << blocks_[k].cols;
    else
      os << blocks_[k].size();
  }
  os << ']';
  return os.str();
}

void require_same_shape(const Shape& a, const Shape& b, const char* context) {
  if (!(a == b))
    throw ShapeMismatch(std::string(context) + ": expected shape " +
                        a.to_string() + ", got " + b.to_string());
}

SpacePoint::SpacePoint(Shape shape, std::vector<double> values)
    : shape_(std::move(shape)), values_(std::move(values)) {
  if (values_.size() != shape_.size())
    throw ShapeMismatch("point has " + std::to_string(values_.size()) +
                        " values but shape " + shape_.to_string() +
                        " requires " + std::to_string(shape_.size()));
  if (!all_finite()) throw InvalidParameter("point has non-finite entries");
}

SpacePoint::SpacePoint(Shape shape, std::vector<double> values, NoCheck)
    : shape_(std::move(shape)), values_(std::move(values)) {}

SpacePoint SpacePoint::zeros(const Shape& shape) {
  return constant(shape, 0.0);
}

SpacePoint SpacePoint::constant(const Shape& shape, double value) {
  return SpacePoint(shape, std::vector<double>(shape.size(), value));
}

SpacePoint SpacePoint::vector(std::vector<double> values) {
  auto n = values.size();
  return SpacePoint(Shape::vector(n), std::move(values));
}

SpacePoint SpacePoint::grid(std::size_t rows, std::size_t cols,
                            std::vector<double> values) {
  return SpacePoint(Shape::grid(rows, cols), std::move(values));
}

SpacePoint SpacePoint::unchecked(Shape shape, std::vector<double> values) {
  if (values.size() != shape.size())
    throw ShapeMismatch("point size does not match shape " +
                        shape.to_string());
  return SpacePoint(std::move(shape), std::move(values), NoCheck{});
}

std::span<const double> SpacePoint::block(std::size_t k) const {
  return std::span<const double>(values_).subspan(shape_.block_offset(k),
                                                   shape_.block(k).size());
}

double SpacePoint::squared_norm() const { return sigcon::squared_norm(values_); }

double SpacePoint::norm() const { return std::sqrt(squared_norm()); }

bool SpacePoint::all_finite() const {
  for (double v : values_)
    if (!std::isfinite(v)) return false;
  return true;
}

SpacePoint operator+(const SpacePoint& a, const SpacePoint& b) {
  require_same_shape(a.shape_, b.shape_, "addition");
  std::vector<double> out(a.values_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.values_[i] + b.values_[i];
  return SpacePoint(a.shape_, std::move(out), SpacePoint::NoCheck{});
}

SpacePoint operator-(const SpacePoint& a, const SpacePoint& b) {
  require_same_shape(a.shape_, b.shape_, "subtraction");
  std::vector<double> out(a.values_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.values_[i] - b.values_[i];
  return SpacePoint(a.shape_, std::move(out), SpacePoint::NoCheck{});
}

SpacePoint operator*(double s, const SpacePoint& a) {
  std::vector<double> out(a.values_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = s * a.values_[i];
  return SpacePoint(a.shape_, std::move(out), SpacePoint::NoCheck{});
}

double dot(const SpacePoint& a, const SpacePoint& b) {
  require_same_shape(a.shape_, b.shape_, "inner product");
  return dot(std::span<const double>(a.values_), std::span<const double>(b.values_));
}

double distance(const SpacePoint& a, const SpacePoint& b) {
  require_same_shape(a.shape_, b.shape_, "distance");
  double s = 0.0;
  for (std::size_t i = 0; i < a.values_.size(); ++i) {
    const double d = a.values_[i] - b.values_[i];
    s += d * d;
  }
  return std::sqrt(s);
}

SpacePoint axpy(double s, const SpacePoint& x, const SpacePoint& y) {
  require_same_shape(x.shape(), y.shape(), "axpy");
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = s * x[i] + y[i];
  return SpacePoint::unchecked(x.shape(), std::move(out));
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double squared_norm(std::span<const double> a) { return dot(a, a); }

} // namespace sigcon
