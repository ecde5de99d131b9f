#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

#include "pla/angles.hpp"

namespace pla::rng {

// splitmix64 output function; the counter-based construction below keys every
// draw by (seed, trial, bin, index) so parallel trials replay identically
// under any execution order.
inline std::uint64_t mix(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t key(std::uint64_t seed, std::uint64_t trial,
                         std::uint64_t bin) {
  std::uint64_t h = mix(seed ^ 0xA0761D6478BD642FULL);
  h = mix(h ^ trial ^ 0xE7037ED1A0B428DBULL);
  h = mix(h ^ bin ^ 0x8EBC6AF09C88C6E3ULL);
  return h;
}

inline std::uint64_t bits(std::uint64_t key, std::uint64_t index) {
  return mix(key + index * 0xD1B54A32D192ED03ULL);
}

/// Uniform draw in the open interval (0, 1); safe under log().
inline double uniform01(std::uint64_t key, std::uint64_t index) {
  return (static_cast<double>(bits(key, index) >> 11) + 0.5) * 0x1.0p-53;
}

/// Independent standard-normal pair via Box-Muller.
inline std::pair<double, double> gaussian_pair(std::uint64_t key,
                                               std::uint64_t index) {
  const double u1 = uniform01(key, 2 * index);
  const double u2 = uniform01(key, 2 * index + 1);
  const double r = std::sqrt(-2.0 * std::log(u1));
  return {r * std::cos(two_pi * u2), r * std::sin(two_pi * u2)};
}

}  // namespace pla::rng
