#include "sigcon/linops/linear_operator.hpp"

#include "sigcon/core/errors.hpp"
#include "sigcon/core/log.hpp"
#include "sigcon/core/random.hpp"
#include "sigcon/linops/fourier.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace sigcon {
namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstRowMap = Eigen::Map<const RowMatrix>;
using RowMap = Eigen::Map<RowMatrix>;
using ConstVecMap = Eigen::Map<const Eigen::VectorXd>;
using VecMap = Eigen::Map<Eigen::VectorXd>;

class IdentityMap final : public LinearMap {
public:
  LinopKind kind() const override { return LinopKind::identity; }
  void apply(std::span<const double> x, std::span<double> out) const override {
    std::copy(x.begin(), x.end(), out.begin());
  }
  void adjoint(std::span<const double> y, std::span<double> out) const override {
    std::copy(y.begin(), y.end(), out.begin());
  }
  std::optional<double> closed_form_norm_sq() const override { return 1.0; }
  nlohmann::json parameters() const override { return nlohmann::json::object(); }
};

class DenseMap : public LinearMap {
public:
  explicit DenseMap(Eigen::MatrixXd a) : a_(std::move(a)) {}
  LinopKind kind() const override { return LinopKind::dense_matrix; }
  void apply(std::span<const double> x, std::span<double> out) const override {
    VecMap(out.data(), a_.rows()).noalias() =
        a_ * ConstVecMap(x.data(), a_.cols());
  }
  void adjoint(std::span<const double> y, std::span<double> out) const override {
    VecMap(out.data(), a_.cols()).noalias() =
        a_.transpose() * ConstVecMap(y.data(), a_.rows());
  }
  nlohmann::json parameters() const override {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < a_.rows(); ++r) {
      std::vector<double> row(a_.cols());
      for (Eigen::Index c = 0; c < a_.cols(); ++c) row[c] = a_(r, c);
      rows.push_back(row);
    }
    return {{"matrix", rows}};
  }

protected:
  Eigen::MatrixXd a_;
};

class DictionaryMap final : public DenseMap {
public:
  using DenseMap::DenseMap;
  LinopKind kind() const override { return LinopKind::dictionary_rows; }
  nlohmann::json parameters() const override {
    auto p = DenseMap::parameters();
    return {{"atoms", p["matrix"]}};
  }
};

class ConvolutionMap final : public LinearMap {
public:
  ConvolutionMap(std::size_t rows, std::size_t cols, Kernel k)
      : rows_(rows), cols_(cols), k_(std::move(k)) {}

  LinopKind kind() const override { return LinopKind::circular_convolution_2d; }

  void apply(std::span<const double> x, std::span<double> out) const override {
    run(x, out, -1);
  }
  void adjoint(std::span<const double> y, std::span<double> out) const override {
    run(y, out, +1);
  }

  // Largest squared magnitude of the kernel's frequency response on the grid.
  std::optional<double> closed_form_norm_sq() const override;

  nlohmann::json parameters() const override {
    return {{"rows", rows_}, {"cols", cols_}, {"kernel_size", k_.size},
            {"kernel", k_.weights}};
  }

private:
  // direction -1: out[i,j] = sum k[a,b] x[i-(a-c), j-(b-c)] (convolution);
  // direction +1: the same with the reflected kernel (correlation).
  void run(std::span<const double> in, std::span<double> out, int direction) const {
    const auto R = static_cast<long>(rows_);
    const auto C = static_cast<long>(cols_);
    const auto s = static_cast<long>(k_.size);
    const long c = s / 2;
    for (long i = 0; i < R; ++i) {
      for (long j = 0; j < C; ++j) {
        double acc = 0.0;
        for (long a = 0; a < s; ++a) {
          long ii = (i + direction * (a - c)) % R;
          if (ii < 0) ii += R;
          for (long b = 0; b < s; ++b) {
            long jj = (j + direction * (b - c)) % C;
            if (jj < 0) jj += C;
            acc += k_.weights[a * s + b] * in[ii * C + jj];
          }
        }
        out[i * C + j] = acc;
      }
    }
  }

  std::size_t rows_, cols_;
  Kernel k_;
};

class FiniteDifferenceMap final : public LinearMap {
public:
  explicit FiniteDifferenceMap(std::size_t n) : n_(n) {}
  LinopKind kind() const override { return LinopKind::finite_difference_1d; }
  void apply(std::span<const double> x, std::span<double> out) const override {
    for (std::size_t i = 0; i + 1 < n_; ++i) out[i] = x[i + 1] - x[i];
  }
  void adjoint(std::span<const double> y, std::span<double> out) const override {
    // Transpose of the (n-1) x n difference matrix.
    out[0] = -y[0];
    for (std::size_t i = 1; i + 1 < n_; ++i) out[i] = y[i - 1] - y[i];
    out[n_ - 1] = y[n_ - 2];
  }
  std::optional<double> closed_form_norm_sq() const override {
    // Largest eigenvalue of the path-graph Laplacian D D^T.
    const double s = std::sin(std::numbers::pi * static_cast<double>(n_ - 1) /
                              (2.0 * static_cast<double>(n_)));
    return 4.0 * s * s;
  }
  nlohmann::json parameters() const override { return {{"n", n_}}; }

private:
  std::size_t n_;
};

Eigen::MatrixXd dct_matrix(std::size_t n) {
  Eigen::MatrixXd m(n, n);
  const double N = static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double alpha = k == 0 ? std::sqrt(1.0 / N) : std::sqrt(2.0 / N);
    for (std::size_t j = 0; j < n; ++j)
      m(k, j) = alpha * std::cos(std::numbers::pi * (2.0 * j + 1.0) * k / (2.0 * N));
  }
  return m;
}

class DctMap final : public LinearMap {
public:
  DctMap(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), cr_(dct_matrix(rows)), cc_(dct_matrix(cols)) {}
  LinopKind kind() const override { return LinopKind::dct_2d; }
  void apply(std::span<const double> x, std::span<double> out) const override {
    ConstRowMap X(x.data(), rows_, cols_);
    RowMap(out.data(), rows_, cols_).noalias() = cr_ * X * cc_.transpose();
  }
  void adjoint(std::span<const double> y, std::span<double> out) const override {
    ConstRowMap Y(y.data(), rows_, cols_);
    RowMap(out.data(), rows_, cols_).noalias() = cr_.transpose() * Y * cc_;
  }
  std::optional<double> closed_form_norm_sq() const override { return 1.0; }
  nlohmann::json parameters() const override {
    return {{"rows", rows_}, {"cols", cols_}};
  }

private:
  std::size_t rows_, cols_;
  Eigen::MatrixXd cr_, cc_;
};

class PairSumMap final : public LinearMap {
public:
  explicit PairSumMap(std::size_t n) : n_(n) {}
  LinopKind kind() const override { return LinopKind::pair_sum; }
  void apply(std::span<const double> x, std::span<double> out) const override {
    for (std::size_t i = 0; i < n_; ++i) out[i] = x[i] + x[n_ + i];
  }
  void adjoint(std::span<const double> y, std::span<double> out) const override {
    for (std::size_t i = 0; i < n_; ++i) out[i] = out[n_ + i] = y[i];
  }
  std::optional<double> closed_form_norm_sq() const override { return 2.0; }
  nlohmann::json parameters() const override { return nlohmann::json::object(); }

private:
  std::size_t n_;
};

class BlockStackMap final : public LinearMap {
public:
  explicit BlockStackMap(std::vector<LinearOperator> parts) : parts_(std::move(parts)) {}
  LinopKind kind() const override { return LinopKind::block_stack; }
  void apply(std::span<const double> x, std::span<double> out) const override {
    std::size_t in = 0, o = 0;
    for (const auto& p : parts_) {
      const auto ni = p.input_shape().size();
      const auto no = p.output_shape().size();
      p.apply_to(x.subspan(in, ni), out.subspan(o, no));
      in += ni;
      o += no;
    }
  }
  void adjoint(std::span<const double> y, std::span<double> out) const override {
    std::size_t in = 0, o = 0;
    for (const auto& p : parts_) {
      const auto ni = p.input_shape().size();
      const auto no = p.output_shape().size();
      p.adjoint_to(y.subspan(o, no), out.subspan(in, ni));
      in += ni;
      o += no;
    }
  }
  std::optional<double> closed_form_norm_sq() const override {
    double m = 0.0;
    for (const auto& p : parts_) m = std::max(m, p.norm_sq());
    return m;
  }
  nlohmann::json parameters() const override {
    nlohmann::json parts = nlohmann::json::array();
    for (const auto& p : parts_) parts.push_back(p.to_json());
    return {{"parts", parts}};
  }

private:
  std::vector<LinearOperator> parts_;
};

} // namespace

std::optional<double> ConvolutionMap::closed_form_norm_sq() const {
  const auto R = static_cast<long>(rows_);
  const auto C = static_cast<long>(cols_);
  const auto s = static_cast<long>(k_.size);
  const long c = s / 2;
  std::vector<fourier::Complex> h(rows_ * cols_, 0.0);
  for (long a = 0; a < s; ++a) {
    for (long b = 0; b < s; ++b) {
      long i = ((a - c) % R + R) % R;
      long j = ((b - c) % C + C) % C;
      h[i * C + j] += k_.weights[a * s + b];
    }
  }
  const auto H = fourier::dft2(rows_, cols_, h);
  double m = 0.0;
  for (const auto& v : H) m = std::max(m, std::norm(v));
  return m;
}

std::string_view to_string(LinopKind kind) {
  switch (kind) {
  case LinopKind::identity: return "identity";
  case LinopKind::dense_matrix: return "dense_matrix";
  case LinopKind::circular_convolution_2d: return "circular_convolution_2d";
  case LinopKind::finite_difference_1d: return "finite_difference_1d";
  case LinopKind::dct_2d: return "dct_2d";
  case LinopKind::dictionary_rows: return "dictionary_rows";
  case LinopKind::pair_sum: return "pair_sum";
  case LinopKind::block_stack: return "block_stack";
  }
  return "unknown";
}

LinearOperator::LinearOperator(std::shared_ptr<const LinearMap> map, Shape input,
                               Shape output)
    : map_(std::move(map)), input_(std::move(input)), output_(std::move(output)) {
  norm_sq_ = estimate_norm_sq(*map_, input_, output_);
}

SpacePoint LinearOperator::apply(const SpacePoint& x) const {
  require_same_shape(input_, x.shape(), "linear operator input");
  std::vector<double> out(output_.size());
  map_->apply(x.values(), out);
  return SpacePoint::unchecked(output_, std::move(out));
}

SpacePoint LinearOperator::adjoint(const SpacePoint& y) const {
  require_same_shape(output_, y.shape(), "linear operator adjoint input");
  std::vector<double> out(input_.size());
  map_->adjoint(y.values(), out);
  return SpacePoint::unchecked(input_, std::move(out));
}

nlohmann::json LinearOperator::to_json() const {
  return {{"kind", std::string(to_string(kind()))},
          {"params", map_->parameters()},
          {"input", input_.to_string()},
          {"output", output_.to_string()},
          {"norm_sq", norm_sq_}};
}

LinearOperator identity_operator(const Shape& shape) {
  return LinearOperator(std::make_shared<IdentityMap>(), shape, shape);
}

LinearOperator dense_matrix_operator(Eigen::MatrixXd matrix) {
  if (matrix.size() == 0) throw InvalidParameter("dense matrix must be nonempty");
  if (!matrix.allFinite()) throw InvalidParameter("dense matrix has non-finite entries");
  const auto rows = static_cast<std::size_t>(matrix.rows());
  const auto cols = static_cast<std::size_t>(matrix.cols());
  return LinearOperator(std::make_shared<DenseMap>(std::move(matrix)),
                        Shape::vector(cols), Shape::vector(rows));
}

LinearOperator circular_convolution_2d(std::size_t rows, std::size_t cols,
                                       Kernel kernel) {
  if (rows == 0 || cols == 0) throw InvalidParameter("convolution grid must be nonempty");
  kernel = make_kernel(kernel.size, std::move(kernel.weights));
  const auto shape = Shape::grid(rows, cols);
  return LinearOperator(std::make_shared<ConvolutionMap>(rows, cols, std::move(kernel)),
                        shape, shape);
}

LinearOperator finite_difference_1d(std::size_t n) {
  if (n < 2) throw InvalidParameter("finite difference needs n >= 2");
  return LinearOperator(std::make_shared<FiniteDifferenceMap>(n), Shape::vector(n),
                        Shape::vector(n - 1));
}

LinearOperator dct_2d(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) throw InvalidParameter("DCT grid must be nonempty");
  const auto shape = Shape::grid(rows, cols);
  return LinearOperator(std::make_shared<DctMap>(rows, cols), shape, shape);
}

LinearOperator dictionary_rows(Eigen::MatrixXd atoms) {
  const auto cols = static_cast<std::size_t>(atoms.cols());
  return dictionary_rows(std::move(atoms), Shape::vector(cols));
}

LinearOperator dictionary_rows(Eigen::MatrixXd atoms, const Shape& input) {
  if (atoms.size() == 0) throw InvalidParameter("dictionary must be nonempty");
  if (!atoms.allFinite()) throw InvalidParameter("dictionary has non-finite entries");
  if (static_cast<std::size_t>(atoms.cols()) != input.size())
    throw ShapeMismatch("dictionary atom length does not match input shape " +
                        input.to_string());
  const auto rows = static_cast<std::size_t>(atoms.rows());
  return LinearOperator(std::make_shared<DictionaryMap>(std::move(atoms)), input,
                        Shape::vector(rows));
}

LinearOperator pair_sum(const Shape& component) {
  return LinearOperator(std::make_shared<PairSumMap>(component.size()),
                        Shape::product({component, component}), component);
}

LinearOperator block_stack(std::vector<LinearOperator> parts) {
  if (parts.empty()) throw InvalidParameter("block_stack needs at least one part");
  std::vector<Shape> ins, outs;
  for (const auto& p : parts) {
    ins.push_back(p.input_shape());
    outs.push_back(p.output_shape());
  }
  auto in = Shape::product(ins);
  auto out = Shape::product(outs);
  return LinearOperator(std::make_shared<BlockStackMap>(std::move(parts)),
                        std::move(in), std::move(out));
}

PowerIterationResult power_iteration(const LinearMap& map, const Shape& input,
                                     const Shape& output, int max_iters,
                                     double tol, std::uint64_t seed) {
  CounterRng rng(seed, streams::power_iteration);
  std::vector<double> v = rng.normal_vector(input.size());
  std::vector<double> lv(output.size()), w(input.size());
  double nv = std::sqrt(squared_norm(v));
  for (auto& e : v) e /= nv;

  PowerIterationResult result;
  double previous = 0.0;
  for (int k = 1; k <= max_iters; ++k) {
    map.apply(v, lv);
    map.adjoint(lv, w);
    const double rayleigh = dot(std::span<const double>(v), std::span<const double>(w));
    result.rayleigh = rayleigh;
    result.iterations = k;
    const double nw = std::sqrt(squared_norm(w));
    if (nw == 0.0) {
      // v lies in the kernel; restart from a fresh direction.
      v = rng.normal_vector(input.size());
      nv = std::sqrt(squared_norm(v));
      for (auto& e : v) e /= nv;
      continue;
    }
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = w[i] / nw;
    if (k > 1 && std::abs(rayleigh - previous) <= tol * std::abs(rayleigh)) {
      result.converged = true;
      break;
    }
    previous = rayleigh;
  }
  return result;
}

double estimate_norm_sq(const LinearMap& map, const Shape& input,
                        const Shape& output, int max_iters, double tol,
                        std::uint64_t seed) {
  if (auto exact = map.closed_form_norm_sq()) return *exact;
  const auto r = power_iteration(map, input, output, max_iters, tol, seed);
  if (r.converged) return kNormSafetyFactor * r.rayleigh;

  // trace(L*L) = sum_k ||L e_k||^2 dominates the largest eigenvalue.
  std::vector<double> e(input.size(), 0.0), le(output.size());
  double trace = 0.0;
  for (std::size_t k = 0; k < e.size(); ++k) {
    e[k] = 1.0;
    map.apply(e, le);
    trace += squared_norm(le);
    e[k] = 0.0;
  }
  warn("power iteration did not converge in " + std::to_string(max_iters) +
       " iterations; using trace bound " + std::to_string(trace));
  return trace;
}

double estimate_norm_sq(const LinearOperator& op, int max_iters, double tol,
                        std::uint64_t seed) {
  return estimate_norm_sq(op.map(), op.input_shape(), op.output_shape(), max_iters,
                          tol, seed);
}

} // namespace sigcon
