#pragma once

#include "sigcon/core/space_point.hpp"
#include "sigcon/solver/solver.hpp"

#include <vector>

namespace sigcon {

/// Floor for 20 log10(0).
inline constexpr double kDecibelFloor = -300.0;

struct ErrorPoint {
  std::size_t n = 0;
  double seconds = 0.0;
  /// 20 log10(||x_n - x_inf|| / ||x_0 - x_inf||).
  double db = 0.0;
};

/// Relative error of every snapshot against the reference point. The first
/// entry is 0 dB. Throws MissingReference when the trace holds no snapshots.
std::vector<ErrorPoint> relative_error_trace(const SolverTrace& trace, const SpacePoint& x_inf);
/// Same from raw iterates (n, seconds, values).
std::vector<ErrorPoint> relative_error_trace(const std::vector<std::size_t>& n,
                                             const std::vector<double>& seconds,
                                             const std::vector<std::vector<double>>& iterates,
                                             std::span<const double> x_inf);

/// 20 log10(||signal|| / ||noise||).
double snr_db(std::span<const double> signal, std::span<const double> noise);

/// Scales `noise` so that 20 log10(||signal|| / ||noise||) = snr.
void scale_noise_to_snr(std::span<const double> signal, std::vector<double>& noise,
                        double snr);
/// Scales `noise` so that 20 log10(||clean + noise|| / ||noise||) = snr, the
/// convention where the reference is the noisy observation itself. Needs
/// snr > 0.
void scale_noise_to_observed_snr(std::span<const double> clean, std::vector<double>& noise,
                                 double snr);

/// ||x - ref|| / ||ref||.
double relative_error(std::span<const double> x, std::span<const double> ref);

} // namespace sigcon
