#pragma once

#include <cmath>
#include <cstdint>

namespace lpwave::rng {

// Counter-based generator: every draw is a pure function of (seed, stream,
// counter), so parallel schedules and replays produce identical streams.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::uint64_t mix(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  return splitmix64(seed ^ splitmix64(stream ^ splitmix64(counter)));
}

/// Uniform double in [0, 1) from 53 high bits.
inline double to_unit(std::uint64_t h) {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

/// Uniform double in (0, 1]; never zero, safe under log().
inline double to_unit_open(std::uint64_t h) {
  return static_cast<double>((h >> 11) + 1) * 0x1.0p-53;
}

inline double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  return to_unit(mix(seed, stream, counter));
}

/// Standard normal draw for a given counter (Box-Muller, cosine branch).
inline double gaussian(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  const double u1 = to_unit_open(mix(seed, stream, 2 * counter));
  const double u2 = to_unit(mix(seed, stream, 2 * counter + 1));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

// Stream ids keep independent uses of one user seed decorrelated.
inline constexpr std::uint64_t kStreamInit = 0x17b1u;     // random initial wavefront
inline constexpr std::uint64_t kStreamNoiseX = 0x4e01u;   // gradient noise, x component
inline constexpr std::uint64_t kStreamNoiseY = 0x4e02u;   // gradient noise, y component

}  // namespace lpwave::rng
