#pragma once

#include <cstdint>

namespace csinst {

// SplitMix64 stream with a Box-Muller normal transform.
//
// The integer stream is a pure function of the seed and is reproducible on
// any conforming platform. Normal deviates additionally go through libm's
// log/cos, so they are bit-stable per platform and libm version; the exact
// recipe is written out in README.md so other implementations can match the
// stream.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform on (0, 1]; never zero, safe to feed into log()
  double next_open01() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // uniform on [0, 1)
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // standard normal via Box-Muller on a (u1, u2) pair; the sine partner of
  // each pair is cached and returned by the following call
  double next_normal();

  // uniform integer in [0, n); plain modulo, bias < 2^-48 for n <= 2^16
  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

 private:
  std::uint64_t state_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace csinst
