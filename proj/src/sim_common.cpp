#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "onoff/estimators.hpp"
#include "onoff/sim.hpp"
#include "sim_detail.hpp"

namespace onoff {
namespace detail {

void init_core(EngineCore& e, const NetworkConfig& c) {
  validate_or_throw(c);
  e.c = c;
  e.horizon = c.horizon;
  e.warmup = c.resolved_warmup();
  e.measured = e.horizon - e.warmup;
  e.tau = c.policy.threshold;
  e.q = c.policy.activation_prob();

  double delta = full_buffer_prob(c.arrivals.kind, c.arrivals.mean_interarrival, e.q);
  double denom = (double)c.n * c.channel.alpha_hat() * e.q * delta;
  e.thr_rate = e.tau == 0.0 ? 0.0 : std::log1p(e.tau / denom);
  e.acc.pivot = (double)(c.n - 1) * c.channel.alpha_hat() * e.q * delta;

  e.links.reserve((size_t)c.n);
  for (int i = 0; i < c.n; ++i) e.links.emplace_back(c.arrivals, c.seed, i);
}

SimStats assemble(EngineCore& e) {
  SimStats s;
  s.config = e.c;
  s.seed = e.c.seed;
  s.horizon = e.horizon;
  s.warmup = e.warmup;
  s.measured_slots = e.measured;

  long arrived = 0, dropped = 0, active = 0;
  double occ = 0, nats = 0;
  s.links.reserve(e.links.size());
  for (auto& lc : e.links) {
    occ += lc.tally.occupancy;
    active += lc.tally.active_slots;
    arrived += lc.tally.arrived;
    dropped += lc.tally.dropped;
    nats += lc.tally.nats;
    for (const auto& [d, cnt] : lc.tally.delay_hist) s.delay_histogram[d] += cnt;
    s.links.push_back(std::move(lc.tally));
  }

  double nm = (double)e.c.n * (double)e.measured;
  s.empirical_delta = occ / nm;
  s.empirical_activation_freq = (double)active / nm;
  s.empirical_drop_prob = arrived > 0 ? (double)dropped / (double)arrived : 0.0;
  s.network_throughput = nats / (double)e.measured;

  for (int b = 0; b < kStatBatches; ++b) {
    long len = batch_len(e.measured, b);
    double dl = 0, ac = 0, th = 0;
    for (const auto& t : s.links) {
      dl += t.occ_batch[b];
      ac += t.act_batch[b];
      th += t.nats_batch[b];
    }
    if (len > 0) {
      s.delta_batch[b] = dl / ((double)e.c.n * (double)len);
      s.activation_batch[b] = ac / ((double)e.c.n * (double)len);
      s.throughput_batch[b] = th / (double)len;
    }
    s.interference_batch_count[b] = e.acc.bcount[b];
    s.interference_batch_mean[b] =
        e.acc.bcount[b] > 0 ? e.acc.bsum[b] / (double)e.acc.bcount[b] : 0.0;
  }

  s.interference_samples = e.acc.count;
  if (e.acc.count > 0) {
    long N = e.acc.count;
    double mean = e.acc.sum / (double)N;
    double d = mean - e.acc.pivot;
    s.interference_mean = mean;
    s.interference_variance = N > 1 ? (e.acc.c2 - (double)N * d * d) / (double)(N - 1) : 0.0;
    s.interference_m4 = e.acc.c4 / N - 4.0 * d * e.acc.c3 / N + 6.0 * d * d * e.acc.c2 / N -
                        3.0 * d * d * d * d;
    s.interference_tail_frac = (double)e.acc.tail / (double)N;
  }
  s.interference_tail_ref_mean = e.acc.pivot;
  return s;
}

}  // namespace detail

SimStats run(const NetworkConfig& c, EngineKind engine) {
  return engine == EngineKind::serial ? run_serial(c) : run_parallel(c);
}

std::vector<StatRow> stat_table(const SimStats& s) {
  std::vector<StatRow> rows;
  rows.reserve(s.links.size() + 1);
  double m = (double)s.measured_slots;
  for (size_t i = 0; i < s.links.size(); ++i) {
    const LinkTally& t = s.links[i];
    StatRow r;
    r.id = std::to_string(i);
    r.v[0] = t.occupancy / m;
    r.v[1] = t.arrived > 0 ? (double)t.dropped / (double)t.arrived : 0.0;
    r.v[2] = (double)t.active_slots / m;
    r.v[3] = t.nats / m;
    if (!t.delay_hist.empty()) {
      DelaySummary d = delay_summary(t.delay_hist);
      r.v[4] = d.mean;
      r.v[5] = (double)d.p95;
      r.has_delay = true;
    }
    rows.push_back(std::move(r));
  }
  StatRow net;
  net.id = "network";
  net.v[0] = s.empirical_delta;
  net.v[1] = s.empirical_drop_prob;
  net.v[2] = s.empirical_activation_freq;
  net.v[3] = s.network_throughput;
  if (!s.delay_histogram.empty()) {
    DelaySummary d = delay_summary(s.delay_histogram);
    net.v[4] = d.mean;
    net.v[5] = (double)d.p95;
    net.has_delay = true;
  }
  rows.push_back(std::move(net));
  return rows;
}

ReplicationResult aggregate_tables(std::vector<std::pair<int, std::vector<StatRow>>> tables,
                                   SimStats rep0) {
  if (tables.empty()) throw std::invalid_argument("aggregate_tables: no tables");
  std::sort(tables.begin(), tables.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  size_t rows = tables[0].second.size();
  for (const auto& [idx, tab] : tables)
    if (tab.size() != rows) throw std::invalid_argument("aggregate_tables: row count mismatch");

  ReplicationResult res;
  res.count = (int)tables.size();
  res.mean.resize(rows);
  res.se.resize(rows);
  for (size_t i = 0; i < rows; ++i) {
    res.mean[i].id = tables[0].second[i].id;
    res.se[i].id = res.mean[i].id;
    for (int col = 0; col < 6; ++col) {
      double sum = 0, sum2 = 0;
      int m = 0;
      for (const auto& [idx, tab] : tables) {
        if (col >= 4 && !tab[i].has_delay) continue;
        double x = tab[i].v[col];
        sum += x;
        sum2 += x * x;
        ++m;
      }
      if (m == 0) continue;
      double mu = sum / m;
      res.mean[i].v[col] = mu;
      if (col >= 4) res.mean[i].has_delay = true;
      if (m > 1) {
        double var = (sum2 - m * mu * mu) / (m - 1);
        res.se[i].v[col] = std::sqrt(std::max(0.0, var) / m);
      }
    }
    res.se[i].has_delay = res.mean[i].has_delay;
  }
  res.rep0 = std::move(rep0);
  return res;
}

ReplicationResult run_replications(const NetworkConfig& c, int count, EngineKind engine) {
  if (count < 1) throw std::invalid_argument("replication count must be >= 1");
  std::vector<std::pair<int, std::vector<StatRow>>> tables;
  tables.reserve((size_t)count);
  SimStats rep0;
  for (int r = 0; r < count; ++r) {
    NetworkConfig cr = c;
    cr.seed = r == 0 ? c.seed : rng::key(c.seed, rng::tag_rep, (std::uint64_t)r);
    SimStats s = run(cr, engine);
    tables.emplace_back(r, stat_table(s));
    if (r == 0) rep0 = std::move(s);
  }
  return aggregate_tables(std::move(tables), std::move(rep0));
}

ConcentrationResult concentration_check(const SimStats& stats, const AnalyticReport& report) {
  if (stats.interference_samples < 1000)
    throw std::invalid_argument("concentration_check: insufficient samples");
  ConcentrationResult r;
  r.samples = stats.interference_samples;
  r.mean_rel_err = report.interference_mean > 0
                       ? std::abs(stats.interference_mean - report.interference_mean) /
                             report.interference_mean
                       : std::abs(stats.interference_mean);
  double N = (double)stats.interference_samples;
  double v = stats.interference_variance;
  double se_var = std::sqrt(std::max(0.0, stats.interference_m4 - v * v) / N);
  r.var_within_bound = v <= report.interference_var_bound + 3.0 * se_var;
  return r;
}

}  // namespace onoff
