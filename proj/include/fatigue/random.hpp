#pragma once

#include <cstdint>
#include <random>

namespace fatigue {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for the generator owning (seed, stream, index). Streams never share
/// state, so draws for index i do not depend on how many indices exist or on
/// which thread consumes them.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return mix64(mix64(mix64(seed) ^ stream) ^ index);
}

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  return Rng(derive_seed(seed, stream, index));
}

/// Uniform draw on [0, 1).
inline double uniform01(Rng& rng) {
  const double u = std::generate_canonical<double, 53>(rng);
  return u < 1.0 ? u : 0x1.fffffffffffffp-1;
}

/// Standard normal draw.
inline double normal01(Rng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }

}  // namespace fatigue
