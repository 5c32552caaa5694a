#pragma once

#include <cstdint>
#include <random>

namespace bnlab {

// Finalizer used to derive well-separated seeds from structured work-unit
// coordinates.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent generator for the work unit (seed, major, minor). Every block /
// proposal / restart owns its own stream, so results do not depend on how
// work units are scheduled across threads.
inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t major,
                                   std::uint64_t minor) {
  const std::uint64_t s = splitmix64(splitmix64(splitmix64(seed) ^ major) ^ minor);
  return std::mt19937_64(s);
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace bnlab
