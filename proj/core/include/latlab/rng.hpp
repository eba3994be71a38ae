#pragma once

#include <cstdint>
#include <random>

namespace latlab {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Engine for one trial; a pure function of (seed, trialIndex), so trials can
/// be computed in any order and on any worker.
inline std::mt19937_64 trialEngine(std::uint64_t seed, std::uint64_t trialIndex) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(trialIndex + 0x632BE59BD9B4E019ULL)));
}

}  // namespace latlab
