#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace statgate {

// splitmix64: seed expansion and deterministic key streams.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  uint64_t state_;
};

// xoshiro256++ seeded by expanding a 64-bit seed with splitmix64.
// Uniforms are 53-bit mantissa doubles in [0, 1); each normal draw
// consumes one uniform pair through Box-Muller, so the generator state
// is exactly the four 64-bit words.
class LangRng {
 public:
  LangRng() : LangRng(0) {}

  explicit LangRng(uint64_t seed) { seed_with(seed); }

  void seed_with(uint64_t seed) {
    seed_ = seed;
    SplitMix64 sm(seed);
    for (auto& w : s_) w = sm.next();
  }

  uint64_t seed() const { return seed_; }
  const std::array<uint64_t, 4>& state() const { return s_; }

  uint64_t next_u64() {
    const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    // log1p(-u1) keeps the argument strictly negative-of-zero safe: u1 < 1.
    return std::sqrt(-2.0 * std::log1p(-u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::array<uint64_t, 4> s_{};
  uint64_t seed_ = 0;
};

}  // namespace statgate
