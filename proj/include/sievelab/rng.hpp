// rng.hpp
//
// Reproducible 64-bit generator for the Monte-Carlo estimators.
//
// The generator is SplitMix64 (Steele, Lea, Flood 2014): a 64-bit counter
// advanced by the odd constant 0x9E3779B97F4A7C15, with a two-round
// xor-shift-multiply finalizer. Bounded draws use rejection sampling on the
// top range so every value in [0, n) is equally likely. Derived streams mix
// (seed, stream id) through the same finalizer, so a table produced with a
// given seed is bit-identical no matter how samples are scheduled.

#pragma once

#include <cstdint>

namespace sievelab {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n), n >= 1, by rejection on the top partial block.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = next();
    } while (v >= limit);
    return v % n;
  }

  // Stream derived from (seed, id); independent of draw scheduling.
  static SplitMix64 derived(std::uint64_t seed, std::uint64_t id) {
    SplitMix64 mixer(seed ^ (0xA5A5A5A5A5A5A5A5ull * (id + 1)));
    return SplitMix64(mixer.next());
  }

 private:
  std::uint64_t state_;
};

// Documented default seed for every CLI estimator.
inline constexpr std::uint64_t kDefaultSeed = 0x5EED5EEDull;

}  // namespace sievelab
