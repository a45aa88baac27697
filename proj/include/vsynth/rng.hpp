#pragma once

#include <cstdint>
#include <random>

namespace vsynth {

/// The single random stream type used by every stochastic operation.
using Rng = std::mt19937_64;

/// Stream seed for sub-task `offset` of a run seeded with `master`.
/// SplitMix64 finalizer so neighbouring masters never share streams.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t offset) noexcept {
  std::uint64_t z = master + (offset + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace vsynth
