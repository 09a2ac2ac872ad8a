// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

namespace ordertau::lab {

// SplitMix64 step; used for seeding and substream derivation.
struct SplitMix64 {
  std::uint64_t state;
  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
};

// xoshiro256** with deterministic substream derivation: the generator for
// (seed, stream) is fully determined by those two values, so chunked
// parallel runs reproduce bit-identically for any thread count.
class Xoshiro256ss {
public:
  Xoshiro256ss(std::uint64_t seed, std::uint64_t stream) {
    SplitMix64 sm{seed ^ (0xD1B54A32D192ED03ULL + stream * 0x9E3779B97F4A7C15ULL)};
    for (auto& word : s_) word = sm.next();
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[3] = 1;  // all-zero state is invalid
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform double in [0, 1), 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t s_[4];
};

// Decorrelates runs that share a user seed but serve different purposes.
inline std::uint64_t derived_seed(std::uint64_t seed, std::uint64_t purpose) {
  SplitMix64 sm{seed ^ (purpose * 0xBF58476D1CE4E5B9ULL)};
  return sm.next();
}

}  // namespace ordertau::lab
