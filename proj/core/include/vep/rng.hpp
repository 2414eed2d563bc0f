#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace vep::rng {

// Counter-based generator: out(key, i) = mix64(key + i * 0x9E3779B97F4A7C15).
// Stateless, so a draw depends only on (key, counter), never on call order;
// seeded fields are reproducible node by node.

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t value(std::uint64_t key, std::uint64_t counter) {
  return mix64(key + counter * 0x9E3779B97F4A7C15ULL);
}

/// Uniform in [0,1), 53-bit mantissa.
inline double uniform01(std::uint64_t key, std::uint64_t counter) {
  return static_cast<double>(value(key, counter) >> 11) * 0x1.0p-53;
}

/// Standard normal draw (Box-Muller on the two 32-bit halves of one value).
inline double normal(std::uint64_t key, std::uint64_t counter) {
  const std::uint64_t v = value(key, counter);
  const double u1 = (static_cast<double>(v >> 32) + 1.0) * 0x1.0p-32;  // (0,1]
  const double u2 = static_cast<double>(v & 0xFFFFFFFFULL) * 0x1.0p-32;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace vep::rng
