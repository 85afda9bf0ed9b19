#include "onoff/analytics.hpp"

#include <cmath>
#include <stdexcept>

namespace onoff {

static void check_domain(double lambda, double q) {
  if (!(q > 0.0) || q > 1.0) throw std::domain_error("q must be in (0,1]");
  if (!(lambda >= 1.0)) throw std::domain_error("lambda must be >= 1");
}

double full_buffer_prob(Kind kind, double lambda, double q) {
  check_domain(lambda, q);
  switch (kind) {
    case Kind::pap:
      if (q == 1.0) return 0.0;  // limit of the closed form
      return 1.0 / (1.0 + lambda * (-std::log1p(-q)));
    case Kind::bap:
      return 1.0 / (1.0 + (lambda - 1.0) * q);
    case Kind::cap:
      if (q == 1.0) return 1.0 / lambda;
      // (1 - (1-q)^lambda) / (lambda q), cancellation-safe for small q
      return -std::expm1(lambda * std::log1p(-q)) / (lambda * q);
  }
  return 0.0;
}

double drop_prob(Kind kind, double lambda, double q) {
  check_domain(lambda, q);
  if (q == 1.0) return 0.0;
  switch (kind) {
    case Kind::pap:
      return 1.0 / (1.0 + lambda * (-std::log1p(-q)));
    case Kind::bap:
      return (1.0 - q) / (1.0 + (lambda - 1.0) * q);
    case Kind::cap:
      return std::exp(lambda * std::log1p(-q));
  }
  return 0.0;
}

InterferenceMoments interference_moments(int n, double alpha, const ShadowingSpec& shadowing,
                                         double q, double delta) {
  if (n < 1) throw std::domain_error("n must be >= 1");
  InterferenceMoments m;
  double qd = q * delta;
  m.mean = (double)(n - 1) * alpha * shadowing.mean * qd;
  m.var_bound = (double)(n - 1) * 2.0 * alpha * shadowing.second_moment() * qd;
  return m;
}

double network_throughput_approx(int n, double alpha_hat, double q, double delta) {
  double tau = -std::log(q);
  if (tau == 0.0) return 0.0;
  double denom = (double)n * alpha_hat * q * delta;
  return (double)n * q * delta * std::log1p(tau / denom);
}

ThroughputBounds throughput_bounds(int n, double alpha_hat, double q, double delta) {
  ThroughputBounds b;
  double tau = -std::log(q);
  double denom = (double)n * alpha_hat * q * delta;
  b.lower = network_throughput_approx(n, alpha_hat, q, delta);
  b.upper = (double)n * q * delta * std::log1p((tau + 1.0) / denom);
  return b;
}

AnalyticReport analyze(const NetworkConfig& c) {
  AnalyticReport r;
  Derived d = derived_quantities(c);
  r.kind = c.arrivals.kind;
  r.lambda = c.arrivals.mean_interarrival;
  r.q = d.q_n;
  r.n = c.n;
  r.alpha_hat = d.alpha_hat;
  r.noise_power = c.channel.noise_power;

  r.delta = full_buffer_prob(r.kind, r.lambda, r.q);
  r.drop_prob = onoff::drop_prob(r.kind, r.lambda, r.q);
  InterferenceMoments m = interference_moments(c.n, c.channel.alpha, c.channel.shadowing, r.q, r.delta);
  r.interference_mean = m.mean;
  r.interference_var_bound = m.var_bound;
  r.throughput_approx = network_throughput_approx(c.n, d.alpha_hat, r.q, r.delta);
  ThroughputBounds b = throughput_bounds(c.n, d.alpha_hat, r.q, r.delta);
  r.throughput_lower = b.lower;
  r.throughput_upper = b.upper;

  if (r.kind == Kind::cap && std::abs(r.lambda - std::round(r.lambda)) > 1e-9)
    r.warnings.push_back("CAP closed forms evaluated at non-integer lambda; "
                         "the derivation assumes integer periods");
  return r;
}

}  // namespace onoff
