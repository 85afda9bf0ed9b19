#include "onoff/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace onoff {

const char* to_string(Kind k) {
  switch (k) {
    case Kind::pap: return "pap";
    case Kind::bap: return "bap";
    case Kind::cap: return "cap";
  }
  return "?";
}

const char* to_string(RateMode m) {
  return m == RateMode::instantaneous ? "instantaneous" : "threshold";
}

const char* to_string(ShadowKind k) {
  switch (k) {
    case ShadowKind::lognormal: return "lognormal";
    case ShadowKind::constant: return "constant";
    case ShadowKind::bounded_uniform: return "bounded-uniform";
  }
  return "?";
}

const char* to_string(PhasePolicy p) {
  return p == PhasePolicy::uniform_random ? "uniform-random" : "fixed";
}

Kind kind_from_string(const std::string& s) {
  if (s == "pap") return Kind::pap;
  if (s == "bap") return Kind::bap;
  if (s == "cap") return Kind::cap;
  throw std::invalid_argument("unknown arrival kind: " + s);
}

double ShadowingSpec::second_moment() const {
  switch (kind) {
    case ShadowKind::lognormal: return variance + mean * mean;
    case ShadowKind::constant: return mean * mean;
    case ShadowKind::bounded_uniform:
      return (lower * lower + lower * upper + upper * upper) / 3.0;
  }
  return 0.0;
}

double ShadowingSpec::log_sigma() const {
  return std::sqrt(std::log1p(variance / (mean * mean)));
}

double ShadowingSpec::log_mu() const {
  return std::log(mean) - 0.5 * std::log1p(variance / (mean * mean));
}

ShadowingSpec ShadowingSpec::lognormal_spec(double mean, double variance) {
  ShadowingSpec s;
  s.kind = ShadowKind::lognormal;
  s.mean = mean;
  s.variance = variance;
  return s;
}

ShadowingSpec ShadowingSpec::constant_spec(double value) {
  ShadowingSpec s;
  s.kind = ShadowKind::constant;
  s.mean = value;
  s.variance = 0.0;
  return s;
}

ShadowingSpec ShadowingSpec::bounded_uniform_spec(double lower, double upper) {
  ShadowingSpec s;
  s.kind = ShadowKind::bounded_uniform;
  s.lower = lower;
  s.upper = upper;
  s.mean = 0.5 * (lower + upper);
  s.variance = (upper - lower) * (upper - lower) / 12.0;
  return s;
}

double OnOffPolicy::activation_prob() const { return std::exp(-threshold); }

OnOffPolicy OnOffPolicy::from_q(double q) {
  OnOffPolicy p;
  p.threshold = -std::log(q);
  return p;
}

long default_warmup(const ArrivalSpec& a) {
  return std::max<long>((long)std::ceil(10.0 * a.mean_interarrival), 1000);
}

long NetworkConfig::resolved_warmup() const {
  return warmup >= 0 ? warmup : default_warmup(arrivals);
}

std::vector<std::string> validate(const NetworkConfig& c) {
  std::vector<std::string> errs;
  auto bad = [&](const std::string& path, const std::string& reason) {
    errs.push_back(path + ": " + reason);
  };

  if (c.n < 1) bad("n", "link count must be >= 1");

  if (!(c.channel.alpha >= 0.0 && c.channel.alpha <= 1.0))
    bad("channel.alpha", "alpha out of [0,1]");
  if (!(c.channel.noise_power > 0.0)) bad("channel.noise_power", "must be > 0");

  const ShadowingSpec& sh = c.channel.shadowing;
  if (!(sh.mean > 0.0 && sh.mean <= 1.0)) bad("channel.shadowing.mean", "mean out of (0,1]");
  switch (sh.kind) {
    case ShadowKind::lognormal:
      if (!(sh.variance >= 0.0)) bad("channel.shadowing.variance", "must be >= 0");
      break;
    case ShadowKind::constant:
      break;
    case ShadowKind::bounded_uniform:
      if (!(sh.lower > 0.0)) bad("channel.shadowing.lower", "must be > 0");
      if (!(sh.upper >= sh.lower)) bad("channel.shadowing.upper", "must be >= lower");
      if (std::abs(sh.mean - 0.5 * (sh.lower + sh.upper)) > 1e-9)
        bad("channel.shadowing.mean", "inconsistent with (lower+upper)/2");
      break;
  }
  if (sh.second_moment() < sh.mean * sh.mean - 1e-12)
    bad("channel.shadowing", "second moment below mean^2");

  if (!(c.arrivals.mean_interarrival >= 1.0))
    bad("arrivals.lambda", "mean interarrival must be >= 1");
  if (c.arrivals.kind == Kind::cap) {
    double l = c.arrivals.mean_interarrival;
    if (std::abs(l - std::round(l)) > 1e-9) bad("arrivals.lambda", "CAP requires integer lambda");
  }
  if (c.arrivals.phase_policy == PhasePolicy::fixed && c.arrivals.phase_offset < 0)
    bad("arrivals.phase_offset", "must be >= 0");

  if (!(c.policy.threshold >= 0.0) || !std::isfinite(c.policy.threshold))
    bad("policy.tau", "threshold must be finite and >= 0");

  if (c.horizon < 1) bad("horizon", "must be >= 1");
  long w = c.resolved_warmup();
  if (w < 0) bad("warmup", "must be >= 0");
  if (w >= c.horizon) bad("warmup", "must be < horizon");

  return errs;
}

void validate_or_throw(const NetworkConfig& c) {
  auto errs = validate(c);
  if (errs.empty()) return;
  std::string msg = "invalid config:";
  for (const auto& e : errs) msg += "\n  " + e;
  throw std::invalid_argument(msg);
}

Derived derived_quantities(const NetworkConfig& c) {
  Derived d;
  d.q_n = c.policy.activation_prob();
  d.alpha_hat = c.channel.alpha_hat();
  d.kappa = c.channel.kappa();
  d.rho = c.arrivals.rho();
  return d;
}

}  // namespace onoff
