#pragma once

// Counter-based randomness. Every draw is a pure function of
// (seed, stream, trial, index), so trials can run in any order or on any
// thread and two algorithms can replay exactly the same draws.

#include <cstdint>

namespace bap {

enum class Stream : std::uint64_t {
  Sampling = 1,    // per-bin configuration draws
  Type0Coins = 2,  // type-0 magician tie-break coins
  TypePCoins = 3,  // per-item magician tie-break coins
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t hash_counter(std::uint64_t seed, Stream stream, std::uint64_t trial,
                                  std::uint64_t index) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(stream));
  h = splitmix64(h ^ trial);
  return splitmix64(h ^ index);
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(std::uint64_t seed, Stream stream, std::uint64_t trial,
                        std::uint64_t index) {
  return static_cast<double>(hash_counter(seed, stream, trial, index) >> 11) * 0x1.0p-53;
}

/// Draws for one trial of one stream.
class TrialRandom {
 public:
  TrialRandom(std::uint64_t seed, Stream stream, std::uint64_t trial)
      : seed_(seed), stream_(stream), trial_(trial) {}

  double at(std::uint64_t index) const { return uniform01(seed_, stream_, trial_, index); }

 private:
  std::uint64_t seed_;
  Stream stream_;
  std::uint64_t trial_;
};

}  // namespace bap
