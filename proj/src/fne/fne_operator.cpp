#include "sigcon/fne/fne_operator.hpp"

#include "sigcon/core/errors.hpp"

namespace sigcon {

FneOperator::FneOperator(std::string kind, Shape domain, VectorMap fn,
                         FneFlags flags, nlohmann::json params)
    : kind_(std::move(kind)), domain_(std::move(domain)), fn_(std::move(fn)),
      flags_(flags), params_(std::move(params)) {
  if (!fn_) throw InvalidParameter("operator '" + kind_ + "' has no map");
  if (flags_.is_residual_projector) flags_.has_distance_sq = true;
}

SpacePoint FneOperator::apply(const SpacePoint& y) const {
  require_same_shape(domain_, y.shape(), kind_.c_str());
  std::vector<double> out(y.size());
  fn_(y.values(), out);
  return SpacePoint::unchecked(domain_, std::move(out));
}

nlohmann::json FneOperator::to_json() const {
  return {{"kind", kind_},
          {"params", params_},
          {"domain", domain_.to_string()},
          {"flags",
           {{"is_projector", flags_.is_projector},
            {"is_residual_projector", flags_.is_residual_projector},
            {"has_distance_sq", flags_.has_distance_sq}}}};
}

NonexpansiveMap as_nonexpansive(const FneOperator& op) {
  return {op.kind(), op.domain(), op.map()};
}

NonexpansiveMap reflection(const FneOperator& op) {
  auto f = op.map();
  return {"reflect(" + op.kind() + ")", op.domain(),
          [f](std::span<const double> in, std::span<double> out) {
            f(in, out);
            for (std::size_t i = 0; i < out.size(); ++i) out[i] = 2.0 * out[i] - in[i];
          }};
}

NonexpansiveMap negation(const Shape& shape) {
  return {"negate", shape, [](std::span<const double> in, std::span<double> out) {
            for (std::size_t i = 0; i < out.size(); ++i) out[i] = -in[i];
          }};
}

NonexpansiveMap identity_map(const Shape& shape) {
  return {"identity", shape, [](std::span<const double> in, std::span<double> out) {
            std::copy(in.begin(), in.end(), out.begin());
          }};
}

} // namespace sigcon
