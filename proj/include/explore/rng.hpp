#pragma once

#include <cstdint>

namespace explore {

/* SplitMix64: tiny, fast, and identical on every platform, which keeps
 * seeded runs reproducible across toolchains. */
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /* Uniform double in [0, 1). */
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /* Uniform double in [lo, hi). */
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /* Integer in [0, n); the modulo bias is negligible for small n. */
  std::uint64_t below(std::uint64_t n) { return n != 0 ? next() % n : 0; }

 private:
  std::uint64_t state_;
};

}  // namespace explore
