#pragma once

#include <cstdint>

namespace carpet {

// Counter-based generator: value k of a stream is a pure function of
// (seed, k), so sampling order never affects results. splitmix64 finalizer
// over seed + (k+1) * golden-gamma.
inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t counter_rng(std::uint64_t seed, std::uint64_t counter) {
  return splitmix64(seed + (counter + 1) * 0x9E3779B97F4A7C15ULL);
}

// Uniform 53-bit fraction in [0, 1).
inline double counter_uniform(std::uint64_t seed, std::uint64_t counter) {
  return static_cast<double>(counter_rng(seed, counter) >> 11) * 0x1.0p-53;
}

// Deterministic stateful convenience wrapper over the counter stream.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t start = 0) : seed_(seed), counter_(start) {}

  std::uint64_t next_u64() { return counter_rng(seed_, counter_++); }
  double next_uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  // Uniform integer in [0, n).
  std::uint64_t next_below(std::uint64_t n) { return n ? next_u64() % n : 0; }

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_;
};

}  // namespace carpet
