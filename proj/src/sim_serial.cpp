#include <stdexcept>

#include "onoff/sim.hpp"
#include "sim_detail.hpp"

namespace onoff {

using detail::EngineCore;

struct SerialEngine::Impl {
  EngineCore core;
  long next_slot = 0;
  bool finished = false;
  std::vector<int> active;
  std::vector<double> gains;
};

SerialEngine::SerialEngine(const NetworkConfig& c) : impl_(new Impl) {
  detail::init_core(impl_->core, c);
  impl_->gains.resize((size_t)c.n);
}

SerialEngine::~SerialEngine() = default;

SlotRecord SerialEngine::step_slot(long slot) {
  Impl& im = *impl_;
  EngineCore& e = im.core;
  if (im.finished) throw std::logic_error("step_slot after finish");
  if (slot != im.next_slot || slot >= e.horizon)
    throw std::logic_error("step_slot out of order");
  ++im.next_slot;

  bool measured = slot >= e.warmup;
  int b = measured ? detail::batch_of(slot, e.warmup, e.measured) : 0;

  SlotRecord rec;
  rec.slot = slot;
  im.active.clear();
  for (int i = 0; i < e.c.n; ++i) {
    detail::SlotOutcome out = detail::advance_link(e.links[(size_t)i], e.c, slot, measured, b);
    rec.drops_this_slot += out.drops;
    if (out.active) {
      im.active.push_back(i);
      im.gains[(size_t)i] = out.h;
    }
  }
  rec.active_set = im.active;

  rec.interference_samples.reserve(im.active.size());
  for (int i : im.active) {
    double I = detail::interference_at(e.c.channel, e.c.seed, slot, i, im.active);
    rec.interference_samples.emplace_back(i, I);
    if (measured) {
      e.acc.add(I, b);
      double rate = e.c.rate_mode == RateMode::instantaneous
                        ? std::log1p(im.gains[(size_t)i] / (I + e.c.channel.noise_power))
                        : e.thr_rate;
      e.links[(size_t)i].tally.nats += rate;
      e.links[(size_t)i].tally.nats_batch[b] += rate;
    }
    detail::depart_link(e.links[(size_t)i], slot, measured);
  }

  for (const auto& lc : e.links) detail::check_conservation(lc);
  return rec;
}

SimStats SerialEngine::finish() {
  Impl& im = *impl_;
  if (im.finished) throw std::logic_error("finish called twice");
  if (im.next_slot != im.core.horizon)
    throw std::logic_error("finish before horizon");
  im.finished = true;
  return detail::assemble(im.core);
}

SimStats run_serial(const NetworkConfig& c) {
  SerialEngine eng(c);
  for (long s = 0; s < c.horizon; ++s) eng.step_slot(s);
  return eng.finish();
}

}  // namespace onoff
