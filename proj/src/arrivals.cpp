#include "onoff/arrivals.hpp"

#include <cmath>
#include <stdexcept>

#include "onoff/rng.hpp"

namespace onoff {

ArrivalStream::ArrivalStream(const ArrivalSpec& spec, std::uint64_t seed, int link)
    : spec_(spec), seed_(seed), link_(link) {
  if (spec_.kind == Kind::cap) {
    lambda_int_ = (long)std::llround(spec_.mean_interarrival);
    if (spec_.phase_policy == PhasePolicy::fixed) {
      phase_ = ((spec_.phase_offset % lambda_int_) + lambda_int_) % lambda_int_;
    } else {
      rng::Stream g(rng::key(seed_, rng::tag_phase, (std::uint64_t)link_));
      phase_ = (long)(g.unit() * (double)lambda_int_);
      if (phase_ >= lambda_int_) phase_ = lambda_int_ - 1;
    }
  }
}

int ArrivalStream::arrivals_in_slot(long slot) const {
  switch (spec_.kind) {
    case Kind::cap:
      return ((slot - phase_) % lambda_int_ + lambda_int_) % lambda_int_ == 0 ? 1 : 0;
    case Kind::bap: {
      rng::Stream g(rng::key(seed_, rng::tag_count, (std::uint64_t)slot, (std::uint64_t)link_));
      return g.unit() < spec_.rho() ? 1 : 0;
    }
    case Kind::pap: {
      rng::Stream g(rng::key(seed_, rng::tag_count, (std::uint64_t)slot, (std::uint64_t)link_));
      return g.poisson(spec_.rho());
    }
  }
  return 0;
}

double ArrivalStream::first_offset(long slot, int count) const {
  if (spec_.kind != Kind::pap || count < 1) return 0.0;
  rng::Stream g(rng::key(seed_, rng::tag_offset, (std::uint64_t)slot, (std::uint64_t)link_));
  // min of `count` i.i.d. uniforms
  return 1.0 - std::pow(1.0 - g.unit(), 1.0 / (double)count);
}

double pap_interarrival_density(double x, double lambda) {
  if (!(x > 0.0)) throw std::domain_error("pap_interarrival_density: x must be > 0");
  if (!(lambda >= 1.0)) throw std::domain_error("pap_interarrival_density: lambda must be >= 1");
  return std::exp(-x / lambda) / lambda;
}

double bap_interarrival_pmf(long m, double lambda) {
  if (m < 1) throw std::domain_error("bap_interarrival_pmf: m must be >= 1");
  if (!(lambda >= 1.0)) throw std::domain_error("bap_interarrival_pmf: lambda must be >= 1");
  double rho = 1.0 / lambda;
  return std::pow(1.0 - rho, (double)(m - 1)) * rho;
}

}  // namespace onoff
