#include "sigcon/cli/serialization.hpp"

#include "sigcon/cli/io.hpp"

#include <cmath>

namespace sigcon::serial {
namespace fs = std::filesystem;

namespace {

// Library errors raised while building an object are reported against the
// object's field.
template <class F>
auto guarded(const JsonView& v, F f) {
  try {
    return f();
  } catch (const FieldError&) {
    throw;
  } catch (const Error& e) {
    v.fail(e.what());
  }
}

Eigen::MatrixXd matrix_from_json(const JsonView& v, const std::string& key,
                                 const fs::path& base) {
  if (v.has("csv")) {
    try {
      return io::read_matrix_csv(base / v.text("csv"));
    } catch (const Error& e) {
      v.fail("csv", e.what());
    }
  }
  const auto rows = v.child(key);
  const auto n = rows.size();
  if (n == 0) v.fail(key, "must not be empty");
  Eigen::MatrixXd m;
  for (std::size_t r = 0; r < n; ++r) {
    const auto& row = rows.json()[r];
    if (!row.is_array()) rows.fail("rows must be arrays of numbers");
    if (r == 0) m.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(row.size()));
    if (row.size() != static_cast<std::size_t>(m.cols())) rows.fail("rows differ in length");
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (!row[c].is_number()) rows.fail("entries must be numbers");
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c].get<double>();
    }
  }
  return m;
}

Partition partition_from_json(const JsonView& v, const Shape& domain) {
  if (v.has("partition")) return v.counts("partition");
  if (v.has("group_length")) {
    const auto len = v.count("group_length");
    if (len == 0 || domain.size() % len != 0)
      v.fail("group_length", "must divide the domain size " + std::to_string(domain.size()));
    return uniform_partition(domain.size(), len);
  }
  return partition_of(domain);
}

FneOperator projector_from_json(const JsonView& v, const Shape& domain, const fs::path& base) {
  auto op = fne_from_json(v, domain, base);
  if (!op.flags().is_projector) v.fail("kind", "must name a projector");
  return op;
}

} // namespace

Shape shape_from_json(const JsonView& v) {
  return guarded(v, [&] {
    if (v.has("vector")) return Shape::vector(v.count("vector"));
    if (v.has("grid")) {
      const auto g = v.counts("grid");
      if (g.size() != 2) v.fail("grid", "must be [rows, cols]");
      return Shape::grid(g[0], g[1]);
    }
    if (v.has("product")) {
      const auto parts = v.child("product");
      std::vector<Shape> shapes;
      for (std::size_t k = 0; k < parts.size(); ++k) shapes.push_back(shape_from_json(parts.at(k)));
      return Shape::product(shapes);
    }
    v.fail("needs one of 'vector', 'grid' or 'product'");
  });
}

nlohmann::json shape_to_json(const Shape& s) {
  auto one = [](const Block& b) -> nlohmann::json {
    if (b.grid) return {{"grid", {b.rows, b.cols}}};
    return {{"vector", b.size()}};
  };
  if (s.block_count() == 1) return one(s.block(0));
  nlohmann::json parts = nlohmann::json::array();
  for (const auto& b : s.blocks()) parts.push_back(one(b));
  return {{"product", parts}};
}

Kernel kernel_from_json(const JsonView& v) {
  return guarded(v, [&] {
    const auto type = v.text("type", v.has("weights") ? "explicit" : "gaussian");
    const auto size = v.count("size");
    if (type == "gaussian") return make_gaussian_kernel(size, v.real("sigma"));
    if (type == "uniform") return make_uniform_kernel(size);
    if (type == "explicit") return make_kernel(size, v.reals("weights"));
    v.fail("type", "unknown kernel type '" + type + "'");
  });
}

LinearOperator linop_from_json(const JsonView& v, const Shape& input, const fs::path& base) {
  const auto kind = v.text("kind");
  auto op = guarded(v, [&]() -> LinearOperator {
    if (kind == "identity") return identity_operator(input);
    if (kind == "dense_matrix") return dense_matrix_operator(matrix_from_json(v, "matrix", base));
    if (kind == "circular_convolution_2d") {
      if (!input.is_single_grid()) v.fail("convolution needs a grid input");
      const auto& b = input.block(0);
      return circular_convolution_2d(b.rows, b.cols, kernel_from_json(v.child("kernel")));
    }
    if (kind == "finite_difference_1d") return finite_difference_1d(input.size());
    if (kind == "dct_2d") {
      if (!input.is_single_grid()) v.fail("dct_2d needs a grid input");
      return dct_2d(input.block(0).rows, input.block(0).cols);
    }
    if (kind == "dictionary_rows") return dictionary_rows(matrix_from_json(v, "atoms", base), input);
    if (kind == "pair_sum") {
      if (input.block_count() != 2 || !(input.block(0) == input.block(1)))
        v.fail("pair_sum needs a product of two equal blocks");
      return pair_sum(Shape({input.block(0)}));
    }
    if (kind == "block_stack") {
      const auto parts = v.child("parts");
      if (parts.size() != input.block_count())
        v.fail("parts", "needs one operator per input block (" +
                            std::to_string(input.block_count()) + ")");
      std::vector<LinearOperator> ops;
      for (std::size_t k = 0; k < parts.size(); ++k)
        ops.push_back(linop_from_json(parts.at(k), Shape({input.block(k)}), base));
      return block_stack(std::move(ops));
    }
    v.fail("kind", "unknown operator kind '" + kind + "'");
  });
  if (!(op.input_shape() == input))
    v.fail("operator input " + op.input_shape().to_string() + " does not match " +
           input.to_string());
  return op;
}

FneOperator fne_from_json(const JsonView& v, const Shape& domain, const fs::path& base) {
  const auto kind = v.text("kind");
  return guarded(v, [&]() -> FneOperator {
    if (kind == "box") {
      if (v.has("lo") && v.json().at("lo").is_array())
        return box_projector(domain, v.reals("lo"), v.reals("hi"));
      return box_projector(domain, v.real("lo"), v.real("hi"));
    }
    if (kind == "linf_ball") return linf_ball_projector(domain, v.real("rho"));
    if (kind == "singleton") return singleton_projector(point_from_json(v, "point", domain, base));
    if (kind == "nonneg_orthant") return nonneg_orthant_projector(domain);
    if (kind == "blockwise_constant")
      return blockwise_constant_projector(domain, partition_from_json(v, domain));
    if (kind == "residual") return residual_of(projector_from_json(v.child("of"), domain, base));
    if (kind == "soft_threshold") return soft_thresholder(domain, v.real("gamma"));
    if (kind == "group_shrinkage") {
      auto p = partition_from_json(v, domain);
      std::vector<double> rho = v.json().at("rho").is_array()
                                    ? v.reals("rho")
                                    : std::vector<double>(p.size(), v.real("rho"));
      return group_shrinkage(domain, std::move(p), std::move(rho));
    }
    if (kind == "soft_clip") {
      const auto variant = v.text("variant", "rational");
      if (variant == "rational") return soft_clipper(domain, SoftClipVariant::rational);
      if (variant == "arctan") return soft_clipper(domain, SoftClipVariant::arctan);
      if (variant == "exp_sat") return soft_clipper(domain, SoftClipVariant::exp_sat);
      v.fail("variant", "must be rational, arctan or exp_sat");
    }
    if (kind == "mean_adjust") return mean_adjust(domain, v.real("rho"));
    if (kind == "svd_soft_threshold") {
      if (!domain.is_single_grid()) v.fail("svd_soft_threshold needs a grid domain");
      return svd_soft_threshold(domain.block(0).rows, domain.block(0).cols, v.real("rho"));
    }
    if (kind == "phase") {
      if (!domain.is_single_grid()) v.fail("phase needs a grid domain");
      return phase_prescription(domain.block(0).rows, domain.block(0).cols, v.reals("theta"));
    }
    if (kind == "log_threshold_scaled" || kind == "log_threshold_complement") {
      auto q = log_threshold_prox(domain, v.real("rho"), v.real("gamma"));
      const double beta = v.real("beta", q.cocoercivity());
      return kind == "log_threshold_scaled" ? scale_to_fne(q, beta) : scaled_complement(q, beta);
    }
    v.fail("kind", "unknown operator kind '" + kind + "'");
  });
}

SpacePoint point_from_json(const JsonView& v, const std::string& key, const Shape& shape,
                           const fs::path& base) {
  if (!v.has(key)) return SpacePoint::zeros(shape);
  const auto& j = v.json().at(key);
  std::vector<double> values;
  if (j.is_string()) {
    if (j.get<std::string>() != "zeros") v.fail(key, "string value must be \"zeros\"");
    return SpacePoint::zeros(shape);
  }
  if (j.is_number()) {
    return SpacePoint::constant(shape, v.real(key));
  }
  if (j.is_object()) {
    const auto c = v.child(key);
    try {
      values = io::read_vector_csv(base / c.text("csv"));
    } catch (const FieldError&) {
      throw;
    } catch (const Error& e) {
      c.fail("csv", e.what());
    }
  } else {
    values = v.reals(key);
  }
  if (values.size() != shape.size())
    v.fail(key, "has " + std::to_string(values.size()) + " values, expected " +
                    std::to_string(shape.size()));
  return guarded(v, [&] { return SpacePoint(shape, std::move(values)); });
}

Proxification proxification_from_json(const JsonView& v, const Shape& domain,
                                      const fs::path& base) {
  const auto kind = v.text("kind");
  const auto q = point_from_json(v, "observation", domain, base);
  return guarded(v, [&]() -> Proxification {
    if (kind == "hard_threshold") return proxify_hard_threshold(v.real("gamma"), q);
    if (kind == "svd") {
      const double rho = v.has("rank") ? rank_to_threshold(q, v.count("rank")) : v.real("rho");
      return proxify_svd(rho, q);
    }
    if (kind == "root") return proxify_root(v.real("rho"), q);
    if (kind == "block_threshold") {
      auto p = partition_from_json(v, domain);
      const auto sets = v.child("sets");
      if (sets.size() != p.size()) v.fail("sets", "needs one set per group");
      std::vector<FneOperator> projectors;
      for (std::size_t j = 0; j < p.size(); ++j)
        projectors.push_back(projector_from_json(sets.at(j), Shape::vector(p[j]), base));
      std::vector<double> gammas = v.json().at("gammas").is_array()
                                       ? v.reals("gammas")
                                       : std::vector<double>(p.size(), v.real("gammas"));
      return proxify_block_threshold(std::move(p), std::move(projectors), std::move(gammas), q);
    }
    v.fail("kind", "unknown proxification kind '" + kind + "'");
  });
}

ConstraintSet constraint_from_json(const JsonView& v, const Shape& shape, const fs::path& base) {
  const auto kind = v.text("kind", "whole_space");
  if (kind == "whole_space") return ConstraintSet::whole_space(shape);
  auto op = projector_from_json(v, shape, base);
  const bool bounded = kind == "box" || kind == "linf_ball" || kind == "singleton";
  return ConstraintSet::from_projector(op, bounded, kind);
}

} // namespace sigcon::serial
