#include "sigcon/linops/kernels.hpp"

#include "sigcon/core/errors.hpp"

#include <cmath>
#include <string>

namespace sigcon {
namespace {

void check_size(std::size_t size) {
  if (size == 0 || size % 2 == 0)
    throw InvalidParameter("kernel size must be odd and >= 1, got " +
                           std::to_string(size));
}

} // namespace

Kernel make_gaussian_kernel(std::size_t size, double sigma) {
  check_size(size);
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw InvalidParameter("gaussian kernel sigma must be positive");
  Kernel k{size, std::vector<double>(size * size)};
  const double c = static_cast<double>(size / 2);
  double total = 0.0;
  for (std::size_t r = 0; r < size; ++r) {
    for (std::size_t s = 0; s < size; ++s) {
      const double dr = static_cast<double>(r) - c;
      const double ds = static_cast<double>(s) - c;
      const double w = std::exp(-(dr * dr + ds * ds) / (2.0 * sigma * sigma));
      k.weights[r * size + s] = w;
      total += w;
    }
  }
  for (auto& w : k.weights) w /= total;
  return k;
}

Kernel make_uniform_kernel(std::size_t size) {
  check_size(size);
  const double w = 1.0 / static_cast<double>(size * size);
  return Kernel{size, std::vector<double>(size * size, w)};
}

Kernel make_kernel(std::size_t size, std::vector<double> weights) {
  check_size(size);
  if (weights.size() != size * size)
    throw InvalidParameter("kernel needs size^2 weights");
  for (double w : weights)
    if (!std::isfinite(w)) throw InvalidParameter("kernel weight not finite");
  return Kernel{size, std::move(weights)};
}

} // namespace sigcon
