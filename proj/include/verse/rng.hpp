#pragma once

#include <cmath>
#include <cstdint>

namespace verse {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// xoroshiro128+ seeded through splitmix64. One instance per worker; never
// shared across threads.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    s0_ = splitmix64(sm);
    s1_ = splitmix64(sm);
  }

  // Independent stream for worker `index` of a run seeded with `seed`.
  static Rng for_worker(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t sm = seed;
    splitmix64(sm);  // decorrelate from the single-stream constructor
    return Rng(splitmix64(sm) + 0x9E3779B97F4A7C15ull * (index + 1));
  }

  std::uint64_t next() {
    const std::uint64_t a = s0_;
    std::uint64_t b = s1_;
    const std::uint64_t result = a + b;
    b ^= a;
    s0_ = rotl(a, 55) ^ b ^ (b << 14);
    s1_ = rotl(b, 36);
    return result;
  }

  // Uniform double in [0, 1).
  double uniform() { return (next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<__uint128_t>(next()) * bound) >> 64);
  }

  // Standard normal via Box-Muller; caches the spare value.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    spare_ = radius * std::sin(theta);
    has_spare_ = true;
    return radius * std::cos(theta);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t s0_ = 0;
  std::uint64_t s1_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace verse
