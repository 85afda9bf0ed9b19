#pragma once
// Statistics with uncertainty: binomial standard errors, sim-vs-analytic
// validation rows, and exact delay summaries over integer-delay multisets.

#include <map>
#include <string>
#include <vector>

#include "onoff/analytics.hpp"
#include "onoff/sim.hpp"

namespace onoff {

struct BinomialCi {
  double estimate = 0;
  double standard_error = 0;
};
BinomialCi binomial_ci(long successes, long trials);  // trials < 1 -> error

struct ValidationRow {
  std::string quantity;
  double analytic = 0;
  double empirical = 0;
  double standard_error = 0;
  double z_score = 0;
  bool pass = false;
};

struct Tolerances {
  double z = 3.0;                // |z| bound for estimator rows
  double throughput_rel = 0.15;  // relative tolerance for the approximation row
};

// Rows: delta, drop_prob, activation (vs q*Delta), interference_mean,
// interference_var (one-sided vs the bound), throughput (relative tolerance;
// its z column is scaled so |z| <= 3 iff the relative error is within
// tolerance). Throws if stats and report came from different configs.
std::vector<ValidationRow> compare(const SimStats& stats, const AnalyticReport& report,
                                   const Tolerances& tol = {});

struct DelaySummary {
  double mean = 0;
  long p50 = 0, p95 = 0, max = 0;
  std::map<int, long> histogram;
};
// lower-percentile convention: value at rank ceil(p*N) of the sorted multiset
DelaySummary delay_summary(const std::map<int, long>& delay_samples);  // empty -> error

}  // namespace onoff
