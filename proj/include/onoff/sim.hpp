#pragma once
// Slotted Monte Carlo engine: arrivals, buffer state machine, on-off
// activation, interference, rate accrual, drop/delay accounting.
//
// Two engines produce bit-identical SimStats: a plain per-slot serial
// reference (SerialEngine / run_serial) and a windowed engine whose phases
// are OpenMP-parallel (run_parallel). Equality holds because every draw is
// keyed by (seed, purpose, slot, entity) and every accumulator sees the same
// additions in the same order.

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "onoff/model.hpp"

namespace onoff {

inline constexpr int kStatBatches = 20;  // equal post-warmup batches backing standard errors

struct LinkTally {
  // post-warmup counters
  long arrived = 0, served = 0, dropped = 0;
  long active_slots = 0;
  long full_buffer_slots = 0;  // fullness sampled at the decision instant
  double occupancy = 0.0;      // time-weighted fullness; drives delta_hat
  double nats = 0.0;
  std::map<int, long> delay_hist;       // served-packet delays
  std::map<int, long> drop_delay_hist;  // time-to-drop, kept separate
  // lifetime counters (from slot 0) back the conservation invariant
  long lt_arrived = 0, lt_served = 0, lt_dropped = 0;
  // per-link batch accumulators, folded into network batches at assembly
  std::array<double, kStatBatches> occ_batch{}, act_batch{}, nats_batch{};
};

struct SimStats {
  std::vector<LinkTally> links;
  long measured_slots = 0;

  // network-level summaries
  double empirical_delta = 0;
  double empirical_drop_prob = 0;
  double empirical_activation_freq = 0;
  double network_throughput = 0;  // nats per channel use, summed over links
  std::map<int, long> delay_histogram;

  // interference over post-warmup active-receiver samples
  long interference_samples = 0;
  double interference_mean = 0;
  double interference_variance = 0;
  double interference_m4 = 0;  // central fourth moment
  double interference_tail_frac = 0;      // P{|I - mu| > 0.25 mu}
  double interference_tail_ref_mean = 0;  // the analytic mu the tail refers to

  // network batch means (standard errors for autocorrelated time averages)
  std::array<double, kStatBatches> delta_batch{}, activation_batch{}, throughput_batch{};
  std::array<double, kStatBatches> interference_batch_mean{};
  std::array<long, kStatBatches> interference_batch_count{};

  // replication metadata
  std::uint64_t seed = 0;
  long horizon = 0, warmup = 0;
  NetworkConfig config;
};

struct SlotRecord {
  long slot = 0;
  std::vector<int> active_set;                              // ascending link ids
  std::vector<std::pair<int, double>> interference_samples;  // (receiver, I_i)
  int drops_this_slot = 0;
};

enum class EngineKind { serial, parallel };

// Serial reference: one call per slot, in order, then finish().
class SerialEngine {
 public:
  explicit SerialEngine(const NetworkConfig& c);
  ~SerialEngine();
  SlotRecord step_slot(long slot);
  SimStats finish();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

SimStats run_serial(const NetworkConfig& c);
SimStats run_parallel(const NetworkConfig& c);
SimStats run(const NetworkConfig& c, EngineKind engine = EngineKind::parallel);

// flat per-link stat rows in CSV column order:
// delta, drop, activation, throughput, mean_delay, p95_delay
struct StatRow {
  std::string id;
  std::array<double, 6> v{};
  bool has_delay = false;
};
std::vector<StatRow> stat_table(const SimStats& s);

struct ReplicationResult {
  int count = 1;
  std::vector<StatRow> mean;
  std::vector<StatRow> se;  // zero when count == 1
  SimStats rep0;
};

// pure index-keyed merge; input order never matters
ReplicationResult aggregate_tables(std::vector<std::pair<int, std::vector<StatRow>>> tables,
                                   SimStats rep0);

// replication r uses the base seed for r=0 and a derived seed otherwise
ReplicationResult run_replications(const NetworkConfig& c, int count,
                                   EngineKind engine = EngineKind::parallel);

struct ConcentrationResult {
  double mean_rel_err = 0;
  bool var_within_bound = false;
  long samples = 0;
};
struct AnalyticReport;  // analytics.hpp
ConcentrationResult concentration_check(const SimStats& stats, const AnalyticReport& report);

}  // namespace onoff
