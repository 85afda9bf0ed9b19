#pragma once
// Per-slot arrival generation for the three processes and their interarrival
// distributions. Streams are keyed off (seed, link, slot): querying is pure,
// so any evaluation order yields the same sequences.

#include <cstdint>

#include "onoff/model.hpp"

namespace onoff {

class ArrivalStream {
 public:
  ArrivalStream(const ArrivalSpec& spec, std::uint64_t seed, int link);

  // packets landing in [slot, slot+1)
  int arrivals_in_slot(long slot) const;

  // Position in [0,1) of the earliest arrival in the slot, given its count.
  // Only PAP places arrivals inside the slot (min of `count` uniforms);
  // boundary processes return 0. Feeds the time-weighted occupancy tally.
  double first_offset(long slot, int count) const;

  long phase() const { return phase_; }
  const ArrivalSpec& spec() const { return spec_; }

 private:
  ArrivalSpec spec_;
  std::uint64_t seed_ = 0;
  int link_ = 0;
  long phase_ = 0;       // CAP
  long lambda_int_ = 1;  // CAP
};

double pap_interarrival_density(double x, double lambda);  // (1/l) e^(-x/l)
double bap_interarrival_pmf(long m, double lambda);        // (1-rho)^(m-1) rho

}  // namespace onoff
