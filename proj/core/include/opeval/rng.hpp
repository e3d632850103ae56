#pragma once

#include <cstdint>
#include <random>

namespace opeval {

using Engine = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed of the replication stream keyed by (master, n, replication). Streams
/// depend only on the key, never on scheduling.
constexpr std::uint64_t stream_seed(std::uint64_t master, std::uint64_t n,
                                    std::uint64_t replication) noexcept {
  return mix64(mix64(mix64(master) ^ n) ^ replication);
}

Engine make_engine(std::uint64_t seed);

}  // namespace opeval
