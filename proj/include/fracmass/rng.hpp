#pragma once

#include <cstdint>

namespace fracmass {

// splitmix64; hand-rolled so results are identical across standard
// library implementations.
struct Rng {
  std::uint64_t state;

  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform() { return (next() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // Derive an independent stream, used for per-batch seeding.
  Rng split(std::uint64_t stream) const {
    Rng r(state ^ (0xA0761D6478BD642Full * (stream + 1)));
    r.next();
    return r;
  }
};

}  // namespace fracmass
