#pragma once

#include <cstddef>
#include <vector>

namespace sigcon {

/// Square convolution kernel, row-major, odd side length, centered at
/// (size/2, size/2).
struct Kernel {
  std::size_t size = 1;
  std::vector<double> weights{1.0};

  double at(std::size_t r, std::size_t c) const { return weights[r * size + c]; }
};

/// Normalized (unit-sum) sampled Gaussian.
Kernel make_gaussian_kernel(std::size_t size, double sigma);

/// Normalized box filter: every entry 1/size^2.
Kernel make_uniform_kernel(std::size_t size);

/// Validates an externally supplied kernel (odd size, finite, matching
/// weight count).
Kernel make_kernel(std::size_t size, std::vector<double> weights);

} // namespace sigcon
