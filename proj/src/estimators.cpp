#include "onoff/estimators.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace onoff {

BinomialCi binomial_ci(long successes, long trials) {
  if (trials < 1) throw std::invalid_argument("binomial_ci: trials must be >= 1");
  if (successes < 0 || successes > trials)
    throw std::invalid_argument("binomial_ci: successes out of [0, trials]");
  BinomialCi r;
  r.estimate = (double)successes / (double)trials;
  r.standard_error = std::sqrt(r.estimate * (1.0 - r.estimate) / (double)trials);
  return r;
}

static double z_of(double empirical, double analytic, double se) {
  if (se > 0) return (empirical - analytic) / se;
  if (empirical == analytic) return 0.0;
  return empirical > analytic ? std::numeric_limits<double>::infinity()
                              : -std::numeric_limits<double>::infinity();
}

// standard error of the overall mean from batch means
template <typename A>
static double batch_se(const A& batch, int used) {
  if (used < 2) return 0.0;
  double sum = 0;
  for (int b = 0; b < used; ++b) sum += batch[b];
  double mu = sum / used;
  double s2 = 0;
  for (int b = 0; b < used; ++b) s2 += (batch[b] - mu) * (batch[b] - mu);
  return std::sqrt(s2 / (used - 1) / used);
}

std::vector<ValidationRow> compare(const SimStats& stats, const AnalyticReport& report,
                                   const Tolerances& tol) {
  const NetworkConfig& c = stats.config;
  bool same = report.kind == c.arrivals.kind && report.n == c.n &&
              std::abs(report.lambda - c.arrivals.mean_interarrival) < 1e-12 &&
              std::abs(report.q - c.policy.activation_prob()) < 1e-12 &&
              std::abs(report.alpha_hat - c.channel.alpha_hat()) < 1e-12;
  if (!same) throw std::runtime_error("compare: mismatched configs");

  std::vector<ValidationRow> rows;
  auto push_z = [&](const char* name, double analytic, double empirical, double se) {
    ValidationRow r;
    r.quantity = name;
    r.analytic = analytic;
    r.empirical = empirical;
    r.standard_error = se;
    r.z_score = z_of(empirical, analytic, se);
    r.pass = std::abs(r.z_score) <= tol.z;
    rows.push_back(std::move(r));
  };

  push_z("delta", report.delta, stats.empirical_delta,
         batch_se(stats.delta_batch, kStatBatches));

  {
    long arrived = 0, dropped = 0;
    for (const auto& t : stats.links) {
      arrived += t.arrived;
      dropped += t.dropped;
    }
    double se = arrived > 0 ? binomial_ci(dropped, arrived).standard_error : 0.0;
    push_z("drop_prob", report.drop_prob, stats.empirical_drop_prob, se);
  }

  push_z("activation", report.q * report.delta, stats.empirical_activation_freq,
         batch_se(stats.activation_batch, kStatBatches));

  {
    // only batches that actually saw samples
    double vals[kStatBatches];
    int used = 0;
    for (int b = 0; b < kStatBatches; ++b)
      if (stats.interference_batch_count[b] > 0) vals[used++] = stats.interference_batch_mean[b];
    push_z("interference_mean", report.interference_mean, stats.interference_mean,
           batch_se(vals, used));
  }

  {
    // one-sided: empirical variance must not exceed the bound (plus noise)
    ValidationRow r;
    r.quantity = "interference_var";
    r.analytic = report.interference_var_bound;
    r.empirical = stats.interference_variance;
    double N = (double)stats.interference_samples;
    double v = stats.interference_variance;
    r.standard_error =
        N > 0 ? std::sqrt(std::max(0.0, stats.interference_m4 - v * v) / N) : 0.0;
    r.z_score = z_of(r.empirical, r.analytic, r.standard_error);
    r.pass = r.z_score <= tol.z;
    rows.push_back(std::move(r));
  }

  {
    // relative tolerance, expressed on the z scale: |z| <= tol.z iff the
    // relative error is within tol.throughput_rel
    ValidationRow r;
    r.quantity = "throughput";
    r.analytic = report.throughput_approx;
    r.empirical = stats.network_throughput;
    r.standard_error = std::abs(r.analytic) * tol.throughput_rel / tol.z;
    r.z_score = z_of(r.empirical, r.analytic, r.standard_error);
    r.pass = std::abs(r.z_score) <= tol.z;
    rows.push_back(std::move(r));
  }

  return rows;
}

DelaySummary delay_summary(const std::map<int, long>& delay_samples) {
  long total = 0;
  double wsum = 0;
  for (const auto& [d, cnt] : delay_samples) {
    if (cnt < 0) throw std::invalid_argument("delay_summary: negative count");
    total += cnt;
    wsum += (double)d * (double)cnt;
  }
  if (total <= 0) throw std::invalid_argument("delay_summary: empty histogram");

  DelaySummary s;
  s.histogram = delay_samples;
  s.mean = wsum / (double)total;
  auto value_at = [&](double p) {
    long target = (long)std::ceil(p * (double)total);
    if (target < 1) target = 1;
    long cum = 0;
    for (const auto& [d, cnt] : delay_samples) {
      cum += cnt;
      if (cum >= target) return (long)d;
    }
    return (long)delay_samples.rbegin()->first;
  };
  s.p50 = value_at(0.50);
  s.p95 = value_at(0.95);
  s.max = delay_samples.rbegin()->first;
  return s;
}

}  // namespace onoff
