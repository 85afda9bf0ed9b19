#pragma once
// Shared kernels for the two engines. Everything here is deliberately a pure
// function of (link state, slot); the serial and windowed-parallel engines
// differ only in how they schedule these calls, and every accumulator
// receives the same additions in the same order either way.

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "onoff/analytics.hpp"
#include "onoff/arrivals.hpp"
#include "onoff/channel.hpp"
#include "onoff/model.hpp"
#include "onoff/rng.hpp"
#include "onoff/sim.hpp"

namespace onoff::detail {

struct LinkCore {
  ArrivalStream stream;
  long holding_since = -1;  // -1: buffer empty
  int link_id = 0;
  LinkTally tally;

  LinkCore(const ArrivalSpec& spec, std::uint64_t seed, int link)
      : stream(spec, seed, link), link_id(link) {}
};

struct SlotOutcome {
  bool active = false;
  double h = 0;
  int drops = 0;
};

// post-warmup slot index -> batch id
inline int batch_of(long slot, long warmup, long measured) {
  long idx = slot - warmup;
  long b = idx * kStatBatches / measured;
  return b < kStatBatches ? (int)b : kStatBatches - 1;
}

inline long batch_len(long measured, int b) {
  auto cd = [](long a, long d) { return (a + d - 1) / d; };
  return cd((long)(b + 1) * measured, kStatBatches) - cd((long)b * measured, kStatBatches);
}

// Arrivals (drop-first on a full buffer), fullness sampling, activation
// decision. Departure is separate: it needs no cross-link information, but
// rate accrual does.
inline SlotOutcome advance_link(LinkCore& lc, const NetworkConfig& c, long slot, bool measured,
                                int b) {
  SlotOutcome out;
  LinkTally& t = lc.tally;
  int count = lc.stream.arrivals_in_slot(slot);
  bool held_at_start = lc.holding_since >= 0;

  if (count >= 1) {
    if (held_at_start) {
      ++t.lt_dropped;
      ++out.drops;
      if (measured) {
        ++t.dropped;
        ++t.drop_delay_hist[(int)(slot - lc.holding_since)];
      }
    }
    if (count > 1) {  // PAP can land several packets in one slot; last one wins
      t.lt_dropped += count - 1;
      out.drops += count - 1;
      if (measured) {
        t.dropped += count - 1;
        t.drop_delay_hist[0] += count - 1;
      }
    }
    t.lt_arrived += count;
    if (measured) t.arrived += count;
    lc.holding_since = slot;
  }

  bool now_holding = lc.holding_since >= 0;
  if (measured) {
    if (now_holding) ++t.full_buffer_slots;
    // time-weighted fullness: a fresh PAP arrival covers only the tail of
    // the slot; boundary processes have offset 0
    double occ = held_at_start ? 1.0
                 : (count >= 1 ? 1.0 - lc.stream.first_offset(slot, count) : 0.0);
    t.occupancy += occ;
    t.occ_batch[b] += occ;
  }

  if (now_holding) {
    out.h = direct_gain_at(c.seed, slot, lc.link_id);
    out.active = out.h > c.policy.threshold;
  }
  if (out.active && measured) {
    ++t.active_slots;
    t.act_batch[b] += 1.0;
  }
  return out;
}

inline void depart_link(LinkCore& lc, long slot, bool measured) {
  ++lc.tally.lt_served;
  if (measured) {
    ++lc.tally.served;
    ++lc.tally.delay_hist[(int)(slot - lc.holding_since)];
  }
  lc.holding_since = -1;
}

inline void check_conservation(const LinkCore& lc) {
  long held = lc.holding_since >= 0 ? 1 : 0;
  if (lc.tally.lt_arrived != lc.tally.lt_served + lc.tally.lt_dropped + held)
    throw std::logic_error("packet conservation violated on link " +
                           std::to_string(lc.link_id));
}

inline double interference_at(const ChannelParams& p, std::uint64_t seed, long slot, int receiver,
                              const std::vector<int>& active) {
  double sum = 0;
  for (int j : active)
    if (j != receiver) sum += cross_gain_at(p, seed, slot, j, receiver);
  return sum;
}

// Interference sample accumulator. Higher moments are taken around the
// analytic mean (the pivot) for stability; the pivot also serves as the
// reference point of the relative-deviation tail count.
struct InterfAcc {
  double pivot = 0;
  long count = 0;
  double sum = 0, c2 = 0, c3 = 0, c4 = 0;
  long tail = 0;
  std::array<double, kStatBatches> bsum{};
  std::array<long, kStatBatches> bcount{};

  void add(double I, int b) {
    ++count;
    sum += I;
    double d = I - pivot, d2 = d * d;
    c2 += d2;
    c3 += d2 * d;
    c4 += d2 * d2;
    if (std::abs(I - pivot) > 0.25 * pivot) ++tail;
    bsum[b] += I;
    ++bcount[b];
  }
};

struct EngineCore {
  NetworkConfig c;
  long horizon = 0, warmup = 0, measured = 0;
  double tau = 0, q = 0;
  double thr_rate = 0;  // fixed per-activation rate in threshold mode
  std::vector<LinkCore> links;
  InterfAcc acc;
};

void init_core(EngineCore& e, const NetworkConfig& c);
SimStats assemble(EngineCore& e);

}  // namespace onoff::detail
