#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace affinv {

// All randomness in the library flows through std::mt19937_64 with the
// explicit bit-to-double conversions below, so a given seed produces the
// same stream on every platform (std::uniform_real_distribution is not
// pinned down by the standard, these conversions are).

/// Uniform double in [0, 1) from the top 53 bits of one generator call.
inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform sample from the closed unit disc. Consumes exactly two draws.
inline std::complex<double> unit_disc(std::mt19937_64& rng) {
  const double radius = std::sqrt(uniform_unit(rng));
  const double angle = 2.0 * std::numbers::pi * uniform_unit(rng);
  return std::polar(radius, angle);
}

/// splitmix64 finalizer.
inline std::uint64_t split_mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Sub-seed for the ordinal-th consumer of a base seed. Used by the suite
/// runner so any single case can be replayed in isolation.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t ordinal) {
  return split_mix(base ^ split_mix(ordinal + 1));
}

}  // namespace affinv
