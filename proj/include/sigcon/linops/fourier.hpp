#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace sigcon::fourier {

using Complex = std::complex<double>;

/// Unnormalized 2-D DFT of a row-major rows x cols array:
/// X[k,l] = sum_{a,b} x[a,b] exp(-2 pi i (k a / rows + l b / cols)).
std::vector<Complex> dft2(std::size_t rows, std::size_t cols,
                          std::span<const Complex> x);

/// Inverse of dft2 (includes the 1/(rows*cols) factor).
std::vector<Complex> idft2(std::size_t rows, std::size_t cols,
                           std::span<const Complex> x);

std::vector<Complex> dft2_real(std::size_t rows, std::size_t cols,
                               std::span<const double> x);

} // namespace sigcon::fourier
