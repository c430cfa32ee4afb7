#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <string_view>

namespace holiswap {

// The engine is fixed so that seeded runs reproduce across platforms. Only
// raw engine output is consumed; std:: distributions are implementation
// defined and are never used on simulation paths.
using Rng = std::mt19937_64;
inline constexpr std::string_view rng_algorithm = "mt19937_64";

inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, bound), bound > 0. Rejection sampling, no modulo bias.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

// True with probability 2^-exponent.
inline bool coin_pow2(Rng& rng, unsigned exponent) {
  if (exponent == 0) return true;
  if (exponent >= 64) return false;
  return (rng() >> (64 - exponent)) == 0;
}

}  // namespace holiswap
