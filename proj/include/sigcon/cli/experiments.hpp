#pragma once

#include "sigcon/cli/manifest.hpp"
#include "sigcon/core/problem.hpp"
#include "sigcon/solver/schedule.hpp"
#include "sigcon/solver/solver.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sigcon {

/// A generated instance: data, assembled problem, schedule and solver
/// settings, all determined by the manifest and its seed.
struct Experiment {
  std::string kind;
  std::optional<SpacePoint> ground_truth;
  Problem problem;
  ActivationSchedule schedule;
  SolverConfig config;
  /// Named observations worth exporting (degraded image, piecewise-constant
  /// signal, ...).
  std::vector<std::pair<std::string, SpacePoint>> observations;
  /// Derived parameters (thresholds, realized SNRs, ranks).
  nlohmann::json info;
};

/// Default manifest for `kind` at desk scale.
nlohmann::json default_manifest(const std::string& kind, std::uint64_t seed);

/// Builds the experiment described by `manifest`. Throws FieldError for bad
/// fields and InvalidParameter for inconsistent data.
Experiment build_experiment(const Manifest& manifest);

// Ground-truth phantoms, exposed for tests.
SpacePoint smooth_signal(std::size_t n, std::uint64_t seed);
SpacePoint ellipse_phantom(std::size_t rows, std::size_t cols, std::uint64_t seed);
SpacePoint stroke_phantom(std::size_t rows, std::size_t cols, std::uint64_t seed);
/// Stars (sparse points) and a galaxy (smooth elliptical blob).
std::pair<SpacePoint, SpacePoint> sky_phantom(std::size_t rows, std::size_t cols,
                                              std::size_t stars, std::uint64_t seed);

/// Threshold halfway between sigma_r and sigma_{r+1} of `y`, so that hard
/// thresholding keeps exactly r singular values.
double threshold_for_rank(const SpacePoint& y, std::size_t r);

} // namespace sigcon
