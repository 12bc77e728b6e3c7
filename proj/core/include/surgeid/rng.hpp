#pragma once

#include <cmath>
#include <cstdint>

namespace surgeid {

// Deterministic RNG used for weight init, fleet generation and noise
// injection. Generator and distributions are hand-rolled so that
// byte-identical streams do not depend on the standard library
// implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(splitmix(seed)) {
    if (state_ == 0) state_ = 0x9E3779B97F4A7C15ULL;  // xorshift needs a nonzero state
  }

  std::uint64_t next_u64() {
    // xorshift64* keeps the generator header-only and portable.
    std::uint64_t x = state_;
    x ^= x >> 12;
    x ^= x << 25;
    x ^= x >> 27;
    state_ = x;
    return x * 0x2545F4914F6CDD1DULL;
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller (no cached spare: keeps state minimal).
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  double normal(double mean, double std) { return mean + std * normal(); }

  // Derive an independent substream, e.g. one per vehicle.
  Rng fork(std::uint64_t salt) const { return Rng(splitmix(state_ ^ (salt * 0x9E3779B97F4A7C15ULL))); }

  static std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }

 private:
  std::uint64_t state_;
};

}  // namespace surgeid
