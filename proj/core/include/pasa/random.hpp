#pragma once

#include <cstdint>
#include <random>

namespace pasa {

using Rng = std::mt19937_64;

// Independent stream identifiers mixed into derived seeds.
enum class Stream : std::uint64_t {
  kSkeleton = 1,
  kPolicy = 2,
  kRewards = 3,
  kTrajectory = 4,
  kCycleTrial = 5,
  kScoring = 6,
};

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed for stream `stream` of replication `index` under `root`. Each
// argument passes through the mixer in turn, so adding replications never
// changes the seeds of existing ones.
constexpr std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index,
                                    Stream stream) noexcept {
  return mix64(mix64(mix64(root) ^ index) ^ static_cast<std::uint64_t>(stream));
}

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

}  // namespace pasa
