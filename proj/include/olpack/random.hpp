#pragma once

// Deterministic random streams. Uniform doubles and bounded integers are
// derived from raw mt19937_64 output so results are identical across
// standard library implementations.

#include <cstddef>
#include <cstdint>
#include <random>

namespace olpack {

// splitmix64 finalizer
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed for (trial, step) under a master seed.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial, std::uint64_t step) {
  return mix64(mix64(mix64(master) ^ trial) ^ (step * 0xd1b54a32d192ed03ULL + 1));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // [0, 1)
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // (0, 1]
  double uniform_open_closed() { return 1.0 - uniform(); }

  bool bernoulli(double p) { return uniform() < p; }

  // Uniform on {0, ..., n-1}, n >= 1.
  std::uint64_t index(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t r;
    do {
      r = eng_();
    } while (r >= limit);
    return r % n;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace olpack
