#include "onoff/channel.hpp"

#include <cmath>

namespace onoff {

GainSample draw_direct_gain(rng::Stream& g) { return {g.exponential()}; }

double sample_shadowing(const ShadowingSpec& s, rng::Stream& g) {
  switch (s.kind) {
    case ShadowKind::lognormal:
      return std::exp(s.log_mu() + s.log_sigma() * g.normal());
    case ShadowKind::constant:
      return s.mean;
    case ShadowKind::bounded_uniform:
      return s.lower + (s.upper - s.lower) * g.unit();
  }
  return 0.0;
}

GainSample draw_cross_gain(const ChannelParams& p, rng::Stream& g) {
  if (g.unit() >= p.alpha) return {0.0};
  double beta = sample_shadowing(p.shadowing, g);
  double h = g.exponential();
  return {beta * h};
}

double cross_gain_at(const ChannelParams& p, std::uint64_t seed, long slot, int from, int to) {
  rng::Stream g(rng::key(seed, rng::tag_cross, (std::uint64_t)slot,
                         ((std::uint64_t)(std::uint32_t)from << 32) | (std::uint32_t)to));
  return draw_cross_gain(p, g).value;
}

}  // namespace onoff
