#pragma once
// Channel gain sampling under block fading: unit-mean exponential direct
// gains, alpha-gated shadowed cross gains, all redrawn independently per slot.

#include <cstdint>

#include "onoff/model.hpp"
#include "onoff/rng.hpp"

namespace onoff {

struct GainSample {
  double value = 0.0;
};

GainSample draw_direct_gain(rng::Stream& g);  // Exp(1)

double sample_shadowing(const ShadowingSpec& s, rng::Stream& g);

// with probability alpha: beta * h, beta ~ shadowing, h ~ Exp(1); else 0
GainSample draw_cross_gain(const ChannelParams& p, rng::Stream& g);

// keyed per-(slot, entity) draws shared by both engines
inline double direct_gain_at(std::uint64_t seed, long slot, int link) {
  rng::Stream g(rng::key(seed, rng::tag_direct, (std::uint64_t)slot, (std::uint64_t)link));
  return g.exponential();
}

double cross_gain_at(const ChannelParams& p, std::uint64_t seed, long slot, int from, int to);

}  // namespace onoff
