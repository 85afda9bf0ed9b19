// Times the serial reference against the windowed parallel engine on the same
// config and verifies the outputs are bit-identical. --quick runs a small
// config suitable for CI.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "onoff/model.hpp"
#include "onoff/sim.hpp"

using namespace onoff;

static double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

static bool same_stats(const SimStats& a, const SimStats& b) {
  bool ok = a.empirical_delta == b.empirical_delta &&
            a.empirical_drop_prob == b.empirical_drop_prob &&
            a.empirical_activation_freq == b.empirical_activation_freq &&
            a.network_throughput == b.network_throughput &&
            a.interference_mean == b.interference_mean &&
            a.interference_variance == b.interference_variance &&
            a.interference_samples == b.interference_samples &&
            a.delay_histogram == b.delay_histogram;
  if (!ok) return false;
  if (a.links.size() != b.links.size()) return false;
  for (size_t i = 0; i < a.links.size(); ++i) {
    const LinkTally &x = a.links[i], &y = b.links[i];
    if (x.occupancy != y.occupancy || x.nats != y.nats || x.served != y.served ||
        x.dropped != y.dropped || x.active_slots != y.active_slots ||
        x.delay_hist != y.delay_hist)
      return false;
  }
  return true;
}

int main(int argc, char** argv) {
  CLI::App app{"serial vs parallel engine benchmark"};
  int n = 200;
  long horizon = 50000;
  std::string kind = "cap";
  double lambda = 10, q = 0.1;
  std::uint64_t seed = 1;
  bool quick = false;
  app.add_option("--n", n);
  app.add_option("--horizon", horizon);
  app.add_option("--kind", kind);
  app.add_option("--lambda", lambda);
  app.add_option("--q", q);
  app.add_option("--seed", seed);
  app.add_flag("--quick", quick, "small config for CI");
  CLI11_PARSE(app, argc, argv);

  if (quick) {
    n = 50;
    horizon = 5000;
  }

  NetworkConfig c;
  c.n = n;
  c.horizon = horizon;
  c.seed = seed;
  c.arrivals.kind = kind_from_string(kind);
  c.arrivals.mean_interarrival = lambda;
  c.policy = OnOffPolicy::from_q(q);

  std::printf("engine,n,horizon,ms,delta_hat,throughput_nats\n");

  auto t0 = std::chrono::steady_clock::now();
  SimStats s_serial = run_serial(c);
  double ms_s = ms_since(t0);
  std::printf("serial,%d,%ld,%.1f,%.6f,%.6f\n", n, horizon, ms_s, s_serial.empirical_delta,
              s_serial.network_throughput);

  t0 = std::chrono::steady_clock::now();
  SimStats s_par = run_parallel(c);
  double ms_p = ms_since(t0);
  std::printf("parallel,%d,%ld,%.1f,%.6f,%.6f\n", n, horizon, ms_p, s_par.empirical_delta,
              s_par.network_throughput);

  bool identical = same_stats(s_serial, s_par);
  std::printf("identical=%s speedup=%.2fx\n", identical ? "yes" : "NO",
              ms_p > 0 ? ms_s / ms_p : 0.0);
  return identical ? 0 : 1;
}
