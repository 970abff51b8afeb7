#pragma once

#include <cstdint>
#include <vector>

// Reproducible PRNG used everywhere randomness is needed: weight init,
// epoch shuffles, sampling. splitmix64 expands the user seed into the
// state of a xoshiro256** generator. Both algorithms are pinned so a run
// can be reproduced by an independent implementation:
//
//   splitmix64:  s += 0x9e3779b97f4a7c15
//                z = s
//                z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9
//                z = (z ^ (z >> 27)) * 0x94d049bb133111eb
//                return z ^ (z >> 31)
//
//   xoshiro256**: state s[0..3] = first four splitmix64 outputs;
//                next() = rotl(s[1] * 5, 7) * 9, then the usual xor/shift
//                update with rotl(s[3], 45).
//
//   uniform double in [0,1): (next() >> 11) * 2^-53
//   bounded integer in [0,n): next() % n
//   Fisher-Yates: for i = n-1 .. 1: j = bounded(i+1); swap(a[i], a[j])

namespace arclass {

struct SplitMix64 {
  uint64_t state;
  explicit SplitMix64(uint64_t seed) : state(seed) {}
  uint64_t next() {
    state += 0x9e3779b97f4a7c15ULL;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
};

class Rng {
public:
  explicit Rng(uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto &w : s_) w = sm.next();
  }

  uint64_t next() {
    const uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // [0, 1)
  double uniform() { return (next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // [0, n); n > 0. 64-bit modulo, bias is negligible for the small bounds
  // used here and keeps the generator trivially re-implementable.
  uint64_t bounded(uint64_t n) { return next() % n; }

  template <typename T>
  void shuffle(std::vector<T> &v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(bounded(i));
      std::swap(v[i - 1], v[j]);
    }
  }

private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  uint64_t s_[4];
};

}  // namespace arclass
