#pragma once

#include <cstdint>
#include <random>

namespace qboost {

/// Engine used for every stochastic step. Distributions below are implemented
/// here rather than through <random> so that streams are identical across
/// standard library implementations.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer; used to derive child seeds and to hash noise keys.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept {
  return mix64(mix64(master) ^ mix64(stream + 0x632be59bd9b4e019ULL));
}

inline Rng make_rng(std::uint64_t seed) { return Rng(mix64(seed)); }

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(Rng& rng, double lower, double upper) {
  return lower + (upper - lower) * uniform01(rng);
}

/// Uniform integer in [0, n). Rejection sampling keeps it unbiased.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t draw = rng();
  while (draw >= limit) draw = rng();
  return draw % n;
}

/// Standard normal variate from two uniforms (Box-Muller).
double standard_normal(double u1, double u2);

inline double standard_normal(Rng& rng) {
  return standard_normal(uniform01(rng), uniform01(rng));
}

}  // namespace qboost
