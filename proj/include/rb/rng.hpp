#pragma once

#include <cstdint>
#include <random>

namespace rb {

// Mixes a 64-bit value into a well-distributed seed (splitmix64 finalizer).
inline uint64_t mix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Seeded random stream. Wraps mt19937_64 with portable draw helpers so that
// identical seeds give identical sequences on every platform (std
// distributions are implementation-defined; raw engine output is not).
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(mix64(seed)) {}

  uint64_t next() { return engine_(); }

  // Uniform double in [0, 1).
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return unit() < p; }

  // Uniform integer in [0, n). n must be positive.
  uint32_t below(uint32_t n) {
    // Lemire's multiply-shift; the slight bias (< 2^-32) is irrelevant here
    // and the method is branch-light and portable.
    return static_cast<uint32_t>((static_cast<uint64_t>(static_cast<uint32_t>(engine_())) * n) >> 32);
  }

 private:
  std::mt19937_64 engine_;
};

// Independent per-trial stream derived from a master seed. Trials seeded this
// way can run in any order or in parallel and still reproduce bit-for-bit.
inline Rng derived_rng(uint64_t master_seed, uint64_t index) {
  return Rng(mix64(master_seed ^ mix64(index + 0x51A5C3E2B7D9F011ull)));
}

}  // namespace rb
