#pragma once

#include <cstdint>
#include <vector>

namespace sigcon {

/// Counter-based random stream: draw k of stream s under seed is a pure
/// function of (seed, s, k), so any entry can be regenerated independently
/// of how many draws came before it.
class CounterRng {
public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  /// Uniform on (0, 1), never exactly 0 or 1.
  double uniform();
  double uniform(double lo, double hi);
  double normal();
  std::uint64_t next_u64();
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  std::vector<double> normal_vector(std::size_t n);
  std::vector<double> uniform_vector(std::size_t n, double lo, double hi);

  std::uint64_t counter() const { return counter_; }

private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Stream ids used across the project, kept in one place so that generators
/// never share draws by accident.
namespace streams {
inline constexpr std::uint64_t power_iteration = 1;
inline constexpr std::uint64_t ground_truth = 10;
inline constexpr std::uint64_t dictionary = 11;
inline constexpr std::uint64_t noise_1 = 12;
inline constexpr std::uint64_t noise_2 = 13;
inline constexpr std::uint64_t noise_3 = 14;
inline constexpr std::uint64_t initial_point = 15;
} // namespace streams

} // namespace sigcon
