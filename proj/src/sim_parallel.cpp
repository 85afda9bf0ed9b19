#include <algorithm>
#include <cmath>

#include "onoff/sim.hpp"
#include "sim_detail.hpp"

namespace onoff {

// Windowed schedule. Within a window of W slots:
//   phase 1 (parallel over links): arrivals, buffer updates, activation
//     decisions, departures. Links never read each other's state.
//   phase 2 (parallel over slots): active sets and interference sums. These
//     read only the phase-1 activation flags, never link state.
//   phase 3 (sequential): rate accrual and interference accumulation in
//     slot-major, link-minor order, the same order the serial engine uses,
//     so floating-point sums agree bit for bit.
// Warmup slots skip phases 2 and 3 entirely; nothing pre-warmup feeds the
// statistics, and departures never depend on interference.
SimStats run_parallel(const NetworkConfig& c) {
  detail::EngineCore e;
  detail::init_core(e, c);
  const int n = c.n;
  const long horizon = e.horizon, warmup = e.warmup;

  const int W = (int)std::clamp(4000000L / std::max(1, n), 64L, 2048L);

  std::vector<unsigned char> flags((size_t)W * (size_t)n);
  std::vector<double> hbuf((size_t)W * (size_t)n), ibuf((size_t)W * (size_t)n);
  std::vector<std::vector<int>> act((size_t)W);

  for (long w0 = 0; w0 < horizon; w0 += W) {
    const long w1 = std::min(w0 + W, horizon);

#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
      detail::LinkCore& lc = e.links[(size_t)i];
      for (long s = w0; s < w1; ++s) {
        bool measured = s >= warmup;
        int b = measured ? detail::batch_of(s, warmup, e.measured) : 0;
        detail::SlotOutcome out = detail::advance_link(lc, e.c, s, measured, b);
        size_t at = (size_t)(s - w0) * (size_t)n + (size_t)i;
        flags[at] = out.active ? 1 : 0;
        hbuf[at] = out.h;
        if (out.active) detail::depart_link(lc, s, measured);
      }
    }

    const long m0 = std::max(w0, warmup);
#pragma omp parallel for schedule(static)
    for (long s = m0; s < w1; ++s) {
      size_t k = (size_t)(s - w0);
      std::vector<int>& a = act[k];
      a.clear();
      const unsigned char* f = &flags[k * (size_t)n];
      for (int i = 0; i < n; ++i)
        if (f[i]) a.push_back(i);
      for (int i : a)
        ibuf[k * (size_t)n + (size_t)i] =
            detail::interference_at(e.c.channel, e.c.seed, s, i, a);
    }

    for (long s = m0; s < w1; ++s) {
      size_t k = (size_t)(s - w0);
      int b = detail::batch_of(s, warmup, e.measured);
      for (int i : act[k]) {
        double I = ibuf[k * (size_t)n + (size_t)i];
        e.acc.add(I, b);
        double rate = e.c.rate_mode == RateMode::instantaneous
                          ? std::log1p(hbuf[k * (size_t)n + (size_t)i] /
                                       (I + e.c.channel.noise_power))
                          : e.thr_rate;
        e.links[(size_t)i].tally.nats += rate;
        e.links[(size_t)i].tally.nats_batch[b] += rate;
      }
    }

    for (const auto& lc : e.links) detail::check_conservation(lc);
  }
  return detail::assemble(e);
}

}  // namespace onoff
