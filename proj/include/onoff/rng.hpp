#pragma once
// Counter-based deterministic random streams. Every random quantity in the
// simulator is a pure function of (seed, purpose tag, slot, entity), so the
// windowed parallel engine reproduces the serial reference bit for bit no
// matter how work is scheduled.

#include <cmath>
#include <cstdint>

namespace onoff::rng {

inline constexpr std::uint64_t GAMMA = 0x9e3779b97f4a7c15ull;

// splitmix64 finalizer
inline std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

enum Tag : std::uint64_t {
  tag_direct = 0xd1,
  tag_cross = 0xc2,
  tag_count = 0xa3,
  tag_offset = 0xf4,
  tag_phase = 0xe5,
  tag_rep = 0x5e,
  tag_generic = 0x97,
};

inline std::uint64_t key(std::uint64_t seed, std::uint64_t tag, std::uint64_t a = 0,
                         std::uint64_t b = 0) {
  std::uint64_t k = mix(seed + GAMMA * (tag + 1));
  k = mix(k + GAMMA * (a + 1));
  k = mix(k + GAMMA * (b + 1));
  return k;
}

struct Stream {
  std::uint64_t state;
  explicit Stream(std::uint64_t k) : state(k) {}

  std::uint64_t u64() { return mix(state += GAMMA); }

  // uniform on the open interval (0,1); safe under log()
  double unit() { return (double)(u64() >> 11) * 0x1.0p-53 + 0x1.0p-54; }

  double exponential() { return -std::log(unit()); }

  double normal() {
    double u1 = unit(), u2 = unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  // inversion by uniform products; fine for the small means used here
  int poisson(double mean) {
    double limit = std::exp(-mean), prod = unit();
    int k = 0;
    while (prod > limit) {
      prod *= unit();
      ++k;
    }
    return k;
  }
};

}  // namespace onoff::rng
