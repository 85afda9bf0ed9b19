#pragma once
// Closed-form layer: full-buffer probabilities, drop probabilities,
// interference moments, and the effective-throughput approximation with its
// bounds. Everything here is exact evaluation; no simulation, no asymptotics.

#include <string>
#include <vector>

#include "onoff/model.hpp"

namespace onoff {

// full-buffer probability at the stationary measurement instant
double full_buffer_prob(Kind kind, double lambda, double q);

// probability an arriving packet displaces the held one before service
double drop_prob(Kind kind, double lambda, double q);

struct InterferenceMoments {
  double mean = 0;       // (n-1) * alpha_hat * q * delta
  double var_bound = 0;  // (n-1) * 2 * alpha * kappa * q * delta
};
InterferenceMoments interference_moments(int n, double alpha, const ShadowingSpec& shadowing,
                                         double q, double delta);

// n * q * delta * log(1 + tau / (n * alpha_hat * q * delta)), tau = -log q
double network_throughput_approx(int n, double alpha_hat, double q, double delta);

struct ThroughputBounds {
  double lower = 0;  // equals network_throughput_approx
  double upper = 0;  // tau+1 in the log numerator
};
ThroughputBounds throughput_bounds(int n, double alpha_hat, double q, double delta);

struct AnalyticReport {
  double delta = 1;
  double drop_prob = 0;
  double interference_mean = 0;
  double interference_var_bound = 0;
  double throughput_approx = 0;
  double throughput_lower = 0;
  double throughput_upper = 0;
  // config echo so sim-vs-analytic comparisons can reject mismatched inputs
  Kind kind = Kind::cap;
  double lambda = 1;
  double q = 1;
  int n = 1;
  double alpha_hat = 0;
  double noise_power = 1;
  std::vector<std::string> warnings;
};

AnalyticReport analyze(const NetworkConfig& c);

}  // namespace onoff
