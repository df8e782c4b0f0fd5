#pragma once

#include <cstdint>
#include <random>

namespace gpcover {

/// Mixes a base seed with a stream index (SplitMix64 finalizer). Every
/// stochastic routine derives its generator from (seed, stream) so that trial
/// i of a run is reproducible on its own, independent of how many trials ran
/// before it.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64(derive_seed(seed, stream));
}

// Stream ids for the top-level consumers of a run seed.
inline constexpr std::uint64_t kFieldStream = 0;
inline constexpr std::uint64_t kTrialStreamBase = 1000;

}  // namespace gpcover
