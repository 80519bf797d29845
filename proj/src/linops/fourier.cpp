#include "sigcon/linops/fourier.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace sigcon::fourier {
namespace {

// FFTW's planner is not thread-safe; plans are created once per size and
// direction under a lock, then executed through the new-array interface.
class PlanCache {
public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::size_t rows, std::size_t cols, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_tuple(rows, cols, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::vector<Complex> in(rows * cols), out(rows * cols);
    fftw_plan plan = fftw_plan_dft_2d(
        static_cast<int>(rows), static_cast<int>(cols),
        reinterpret_cast<fftw_complex*>(in.data()),
        reinterpret_cast<fftw_complex*>(out.data()), sign,
        FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, plan);
    return plan;
  }

private:
  std::mutex mutex_;
  std::map<std::tuple<std::size_t, std::size_t, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

std::vector<Complex> run(std::size_t rows, std::size_t cols,
                         std::span<const Complex> x, int sign) {
  std::vector<Complex> in(x.begin(), x.end());
  std::vector<Complex> out(rows * cols);
  fftw_execute_dft(cache().get(rows, cols, sign),
                   reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

} // namespace

std::vector<Complex> dft2(std::size_t rows, std::size_t cols,
                          std::span<const Complex> x) {
  return run(rows, cols, x, FFTW_FORWARD);
}

std::vector<Complex> idft2(std::size_t rows, std::size_t cols,
                           std::span<const Complex> x) {
  auto out = run(rows, cols, x, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(rows * cols);
  for (auto& v : out) v *= scale;
  return out;
}

std::vector<Complex> dft2_real(std::size_t rows, std::size_t cols,
                               std::span<const double> x) {
  std::vector<Complex> c(x.begin(), x.end());
  return dft2(rows, cols, c);
}

} // namespace sigcon::fourier
