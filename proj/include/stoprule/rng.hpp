#pragma once

#include <cstdint>

namespace stoprule::rng {

/// SplitMix64.  Used only to expand seeds into xoshiro state.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
};

/// xoshiro256** main generator.
struct Xoshiro256 {
  std::uint64_t s[4];

  explicit Xoshiro256(std::uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& w : s) w = sm.next();
  }

  static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s[1] * 5, 7) * 9;
    const std::uint64_t t = s[1] << 17;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = rotl(s[3], 45);
    return result;
  }

  /// Uniform draw from {0, ..., bound-1} (Lemire multiply-shift; the tiny
  /// modulo bias is far below anything a 1e6-trial estimate can resolve).
  std::uint64_t below(std::uint64_t bound) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next()) * bound) >> 64);
  }

  /// Uniform double in [0, 1).
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

/// Independent stream for one Monte Carlo trial.  The scheme is fixed and
/// documented: stream i seeds SplitMix64 with seed + i * 0x9E3779B97F4A7C15
/// and takes four outputs as the xoshiro256** state.
inline Xoshiro256 trial_stream(std::uint64_t seed, std::uint64_t trial) {
  return Xoshiro256(seed + trial * 0x9E3779B97F4A7C15ULL);
}

}  // namespace stoprule::rng
