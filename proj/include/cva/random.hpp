#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace cva {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based random stream keyed by (seed, stream index).
///
/// The k-th draw of a stream is a pure function of (seed, index, k), so any
/// partitioning of streams across threads reproduces the same numbers.
class CounterStream {
 public:
  CounterStream(std::uint64_t seed, std::uint64_t index) noexcept
      : key_(mix64(mix64(seed) ^ (index * 0xd1342543de82ef95ULL + 0x632be59bd9b4e019ULL))) {}

  std::uint64_t next_u64() noexcept {
    counter_ += kGolden;
    return mix64(key_ + counter_);
  }

  /// Uniform on the open interval (0, 1).
  double uniform() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; the second variate of each pair is cached.
  double normal() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace cva

namespace cva {

/// Independent seed for a named sub-stream family (e.g. default times vs paths).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t family) noexcept {
  return mix64(seed ^ mix64(family + 0x5851f42d4c957f2dULL));
}

inline constexpr std::uint64_t kDefaultTimeFamily = 1;
inline constexpr std::uint64_t kBootstrapFamily = 2;

}  // namespace cva
