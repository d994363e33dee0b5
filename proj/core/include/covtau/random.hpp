#pragma once

#include <cstdint>

namespace covtau {

/// SplitMix64 output function.
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Portable SplitMix64 stream. Substreams are keyed, not sequenced:
/// Stream::keyed(seed, a, b) depends only on its arguments, so generating
/// (task, trial) cells in any order or on any thread gives the same bits.
class Stream {
 public:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  explicit constexpr Stream(std::uint64_t state) : state_(state) {}

  static constexpr Stream keyed(std::uint64_t seed, std::uint64_t a,
                                std::uint64_t b = 0) {
    std::uint64_t s = splitmix64_mix(seed + kGamma);
    s = splitmix64_mix(s ^ (a + kGamma));
    s = splitmix64_mix(s ^ (b + 2 * kGamma));
    return Stream(s);
  }

  constexpr std::uint64_t next() {
    state_ += kGamma;
    return splitmix64_mix(state_);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  constexpr double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound), bound >= 1, by rejection (no modulo bias).
  constexpr std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    for (;;) {
      const std::uint64_t x = next();
      if (x < limit) return x % bound;
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace covtau
