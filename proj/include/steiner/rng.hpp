#pragma once

#include <cstdint>
#include <cmath>

namespace steiner {

// Counter-based generator: each sample index owns an independent
// splitmix64 stream keyed by (seed, index). Results depend only on the
// (seed, index) pair, never on scheduling, so sharded runs reproduce
// bit-identically for a fixed worker count.
class SampleRng {
 public:
  SampleRng(uint64_t seed, uint64_t index)
      : state_(mix(seed ^ mix(index + 0x9e3779b97f4a7c15ULL))) {}

  uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  /// Uniform on (0, 1), never exactly 0 or 1.
  double next_unit() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; the pair's second value is cached.
  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = next_unit();
    const double u2 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  static uint64_t mix(uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

  uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace steiner
