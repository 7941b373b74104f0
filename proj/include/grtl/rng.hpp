#ifndef GRTL_RNG_HPP
#define GRTL_RNG_HPP

#include <cmath>
#include <cstdint>

// Deterministic, platform-independent RNG: splitmix64 for seeding and hashing,
// xoshiro256** for the stream. std::mt19937 + distributions are avoided because
// libstdc++/libc++ disagree on distribution outputs and we promise byte-stable
// artifacts across toolchains.

namespace grtl {

inline uint64_t splitmix64_next(uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Stable combination of a base seed and a task index; used to fan work out to
// threads without making results depend on the thread count.
inline uint64_t derive_seed(uint64_t seed, uint64_t index) {
  uint64_t s = seed ^ (0x6a09e667f3bcc909ULL + index);
  uint64_t a = splitmix64_next(s);
  uint64_t b = splitmix64_next(s);
  return a ^ (b >> 1);
}

class Rng {
 public:
  explicit Rng(uint64_t seed) {
    uint64_t s = seed;
    for (auto& w : state_) w = splitmix64_next(s);
  }

  uint64_t next_u64() {
    const uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, 1), 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [0, n), rejection-free bias below 2^-64 is not acceptable for
  // reproducibility claims, so use rejection sampling.
  uint64_t next_below(uint64_t n) {
    if (n == 0) return 0;
    const uint64_t threshold = (0 - n) % n;
    for (;;) {
      uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  // Uniform integer in [lo, hi] inclusive.
  long long next_int(long long lo, long long hi) {
    return lo + static_cast<long long>(next_below(static_cast<uint64_t>(hi - lo + 1)));
  }

  bool next_bool(double p = 0.5) { return next_double() < p; }

  // Standard normal via Box-Muller (deterministic, no cached spare).
  double next_gauss();

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  uint64_t state_[4];
};

inline double Rng::next_gauss() {
  double u1 = next_double();
  while (u1 <= 0.0) u1 = next_double();
  const double u2 = next_double();
  const double two_pi = 6.283185307179586476925286766559;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

}  // namespace grtl

#endif
