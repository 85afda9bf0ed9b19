#pragma once
// Domain types, validation, and derived quantities for the on-off threshold
// network model: n links, buffer-size-1 queues, Rayleigh direct gains,
// alpha-gated shadowed cross gains, three arrival processes.

#include <cstdint>
#include <string>
#include <vector>

namespace onoff {

enum class Kind { pap, bap, cap };
enum class RateMode { instantaneous, threshold };
enum class ShadowKind { lognormal, constant, bounded_uniform };
enum class PhasePolicy { uniform_random, fixed };

const char* to_string(Kind k);
const char* to_string(RateMode m);
const char* to_string(ShadowKind k);
const char* to_string(PhasePolicy p);
Kind kind_from_string(const std::string& s);  // throws std::invalid_argument

struct ShadowingSpec {
  ShadowKind kind = ShadowKind::lognormal;
  double mean = 0.5;      // E[beta], in (0,1]
  double variance = 1.0;  // lognormal only
  double lower = 0.0;     // bounded-uniform only
  double upper = 0.0;

  double second_moment() const;  // E[beta^2]
  // underlying normal parameters of the lognormal
  double log_mu() const;
  double log_sigma() const;

  static ShadowingSpec lognormal_spec(double mean, double variance);
  static ShadowingSpec constant_spec(double value);
  static ShadowingSpec bounded_uniform_spec(double lower, double upper);
};

struct ChannelParams {
  double alpha = 0.4;  // cross-link presence probability
  ShadowingSpec shadowing{};
  double noise_power = 1.0;

  double alpha_hat() const { return alpha * shadowing.mean; }
  double kappa() const { return shadowing.second_moment(); }
};

struct ArrivalSpec {
  Kind kind = Kind::cap;
  double mean_interarrival = 10.0;  // lambda, in slots; integer for CAP
  PhasePolicy phase_policy = PhasePolicy::uniform_random;
  long phase_offset = 0;  // fixed phase policy only

  double rho() const { return 1.0 / mean_interarrival; }
};

struct OnOffPolicy {
  double threshold = 2.302585092994046;  // tau, channel-gain units

  double activation_prob() const;  // q = exp(-tau)
  static OnOffPolicy from_q(double q);
};

struct NetworkConfig {
  int n = 500;
  ChannelParams channel{};
  ArrivalSpec arrivals{};
  OnOffPolicy policy{};
  long horizon = 1000000;
  long warmup = -1;  // negative: use default_warmup(arrivals)
  std::uint64_t seed = 1;
  RateMode rate_mode = RateMode::instantaneous;

  long resolved_warmup() const;
};

struct Derived {
  double q_n = 0, alpha_hat = 0, kappa = 0, rho = 0;
};

// buffer chain mixes in O(lambda) slots
long default_warmup(const ArrivalSpec& a);

// Returns the complete list of invariant violations ("field: reason");
// an empty list means the config is valid as-is.
std::vector<std::string> validate(const NetworkConfig& c);
void validate_or_throw(const NetworkConfig& c);  // std::invalid_argument

Derived derived_quantities(const NetworkConfig& c);

}  // namespace onoff
