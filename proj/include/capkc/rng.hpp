#pragma once

// Self-contained deterministic RNG (splitmix64). Standard-library
// distributions are not pinned across implementations; generators and
// property tests need byte-identical streams from a 64-bit seed, so we roll
// the two helpers we need.

#include <cstdint>

namespace capkc {

struct Rng {
  std::uint64_t state;

  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform-enough in [0, n); the modulo bias is irrelevant at these scales.
  long long below(long long n) { return (long long)(next() % (std::uint64_t)n); }

  // Inclusive range.
  long long range(long long lo, long long hi) { return lo + below(hi - lo + 1); }

  bool chance(int num, int den) { return below(den) < num; }
};

}  // namespace capkc
