#pragma once

#include "sigcon/core/space_point.hpp"

#include <json.hpp>

#include <functional>
#include <span>
#include <string>

namespace sigcon {

/// Writes T(in) into out. `in` and `out` never alias.
using VectorMap = std::function<void(std::span<const double> in, std::span<double> out)>;

struct FneFlags {
  /// The operator is the projector onto a closed convex set.
  bool is_projector = false;
  /// The operator is Id - proj_D for a closed convex D (prescription target 0
  /// then encodes membership in D).
  bool is_residual_projector = false;
  /// ||F y||^2 equals d_D(y)^2, as needed by the least-squares objective.
  bool has_distance_sq = false;
};

/// A firmly nonexpansive map on a coordinate space:
/// <x - y, Fx - Fy> >= ||Fx - Fy||^2.
class FneOperator {
public:
  FneOperator(std::string kind, Shape domain, VectorMap fn, FneFlags flags = {},
              nlohmann::json params = nlohmann::json::object());

  const std::string& kind() const { return kind_; }
  const Shape& domain() const { return domain_; }
  const FneFlags& flags() const { return flags_; }
  const nlohmann::json& parameters() const { return params_; }

  SpacePoint apply(const SpacePoint& y) const;
  SpacePoint operator()(const SpacePoint& y) const { return apply(y); }
  void apply_to(std::span<const double> y, std::span<double> out) const { fn_(y, out); }

  const VectorMap& map() const { return fn_; }
  nlohmann::json to_json() const;

private:
  std::string kind_;
  Shape domain_;
  VectorMap fn_;
  FneFlags flags_;
  nlohmann::json params_;
};

/// A map declared nonexpansive (||Rx - Ry|| <= ||x - y||), e.g. a reflection
/// 2P - Id. Used as a building block of averaged compositions.
struct NonexpansiveMap {
  std::string name;
  Shape domain;
  VectorMap fn;
};

NonexpansiveMap as_nonexpansive(const FneOperator& op);
/// 2F - Id, nonexpansive whenever F is firmly nonexpansive.
NonexpansiveMap reflection(const FneOperator& op);
NonexpansiveMap negation(const Shape& shape);
NonexpansiveMap identity_map(const Shape& shape);

} // namespace sigcon
