#include "sigcon/cli/metrics.hpp"

#include "sigcon/core/errors.hpp"

#include <cmath>

namespace sigcon {

namespace {

double dist(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ShapeMismatch("point sizes differ");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

} // namespace

std::vector<ErrorPoint> relative_error_trace(const std::vector<std::size_t>& n,
                                             const std::vector<double>& seconds,
                                             const std::vector<std::vector<double>>& iterates,
                                             std::span<const double> x_inf) {
  if (iterates.empty()) throw MissingReference("no iterate snapshots to compare");
  if (x_inf.empty()) throw MissingReference("empty reference point");
  const double d0 = dist(iterates.front(), x_inf);
  if (d0 == 0.0) throw InvalidParameter("the initial iterate equals the reference point");
  std::vector<ErrorPoint> out;
  for (std::size_t k = 0; k < iterates.size(); ++k) {
    const double d = dist(iterates[k], x_inf);
    const double db = k == 0 ? 0.0 : d == 0.0 ? kDecibelFloor : 20.0 * std::log10(d / d0);
    out.push_back({n[k], seconds[k], std::max(db, kDecibelFloor)});
  }
  return out;
}

std::vector<ErrorPoint> relative_error_trace(const SolverTrace& trace, const SpacePoint& x_inf) {
  if (trace.snapshots.empty() || trace.snapshots.size() != trace.records.size())
    throw MissingReference("trace holds no iterate snapshots");
  std::vector<std::size_t> n;
  std::vector<double> s;
  std::vector<std::vector<double>> xs;
  for (std::size_t k = 0; k < trace.records.size(); ++k) {
    require_same_shape(x_inf.shape(), trace.snapshots[k].shape(), "relative error reference");
    n.push_back(trace.records[k].n);
    s.push_back(trace.records[k].seconds);
    xs.push_back(trace.snapshots[k].to_vector());
  }
  return relative_error_trace(n, s, xs, x_inf.values());
}

double snr_db(std::span<const double> signal, std::span<const double> noise) {
  return 20.0 * std::log10(std::sqrt(squared_norm(signal)) / std::sqrt(squared_norm(noise)));
}

void scale_noise_to_snr(std::span<const double> signal, std::vector<double>& noise, double snr) {
  const double ns = std::sqrt(squared_norm(noise));
  if (ns == 0.0) throw InvalidParameter("cannot scale a zero noise draw");
  const double target = std::sqrt(squared_norm(signal)) / std::pow(10.0, snr / 20.0);
  for (auto& v : noise) v *= target / ns;
}

void scale_noise_to_observed_snr(std::span<const double> clean, std::vector<double>& noise,
                                 double snr) {
  if (!(snr > 0.0)) throw InvalidParameter("observed-reference SNR must be positive");
  // ||c + s n||^2 = tau^2 s^2 ||n||^2  <=>  (tau^2 - 1)|n|^2 s^2 - 2<c,n> s - |c|^2 = 0.
  const double tau2 = std::pow(10.0, snr / 10.0);
  const double nn = squared_norm(noise);
  if (nn == 0.0) throw InvalidParameter("cannot scale a zero noise draw");
  const double cn = dot(clean, std::span<const double>(noise));
  const double cc = squared_norm(clean);
  const double a = (tau2 - 1.0) * nn;
  const double s = (cn + std::sqrt(cn * cn + a * cc)) / a;
  for (auto& v : noise) v *= s;
}

double relative_error(std::span<const double> x, std::span<const double> ref) {
  const double r = std::sqrt(squared_norm(ref));
  if (r == 0.0) throw InvalidParameter("relative error against a zero reference");
  return dist(x, ref) / r;
}

} // namespace sigcon
