#pragma once

#include "sigcon/cli/manifest.hpp"
#include "sigcon/core/problem.hpp"
#include "sigcon/fne/proxification.hpp"
#include "sigcon/linops/kernels.hpp"

#include <filesystem>

namespace sigcon::serial {

/// {"vector": n} | {"grid": [rows, cols]} | {"product": [shape, ...]}
Shape shape_from_json(const JsonView& v);
nlohmann::json shape_to_json(const Shape& s);

/// {"type": "gaussian", "size": s, "sigma": t} | {"type": "uniform", "size": s}
/// | {"size": s, "weights": [...]}
Kernel kernel_from_json(const JsonView& v);

/// Operator description with input shape `input`. Matrices and dictionaries
/// are given inline ("matrix": [[...], ...]) or as a CSV file ("csv": path,
/// relative to `base`).
LinearOperator linop_from_json(const JsonView& v, const Shape& input,
                               const std::filesystem::path& base);

/// Firmly nonexpansive operator on `domain`.
FneOperator fne_from_json(const JsonView& v, const Shape& domain,
                          const std::filesystem::path& base);

/// Point of shape `shape`: an inline array, "zeros", or {"csv": path}.
SpacePoint point_from_json(const JsonView& v, const std::string& key, const Shape& shape,
                           const std::filesystem::path& base);

/// Proxification of an observation: {"kind": "hard_threshold" | "svd" |
/// "root" | "block_threshold", ..., "observation": point}.
Proxification proxification_from_json(const JsonView& v, const Shape& domain,
                                      const std::filesystem::path& base);

/// Closed convex constraint set on `shape`.
ConstraintSet constraint_from_json(const JsonView& v, const Shape& shape,
                                   const std::filesystem::path& base);

} // namespace sigcon::serial
