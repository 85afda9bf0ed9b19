#include <array>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "cli.hpp"
#include "onoff/analytics.hpp"
#include "onoff/csvfmt.hpp"
#include "onoff/estimators.hpp"
#include "onoff/optimizer.hpp"
#include "onoff/sim.hpp"

namespace onoff::cli {

namespace fs = std::filesystem;

static std::string out_path(const GlobalOpts& g, const std::string& name) {
  if (!g.out_dir.empty() && g.out_dir != ".") fs::create_directories(g.out_dir);
  return (fs::path(g.out_dir) / name).string();
}

static void emit_manifest(const GlobalOpts& g, const RunSpec& spec, const std::string& command,
                          const std::string& out_name, const std::vector<std::string>& outputs) {
  write_file(out_path(g, out_name + ".manifest"), manifest_text(spec, command, outputs));
}

static double batch_mean_se(const std::array<double, kStatBatches>& batch) {
  double sum = 0;
  for (double b : batch) sum += b;
  double mu = sum / kStatBatches;
  double s2 = 0;
  for (double b : batch) s2 += (b - mu) * (b - mu);
  return std::sqrt(s2 / (kStatBatches - 1) / kStatBatches);
}

int cmd_analytic(const GlobalOpts& g, RunSpec spec) {
  bool have_q = spec.assigned.count("policy.q") || spec.assigned.count("policy.tau");
  if (!spec.assigned.count("arrivals.kind") || !spec.assigned.count("arrivals.lambda") ||
      !have_q) {
    std::cerr << "analytic: --kind, --lambda, and --q (or --tau) are required\n"
                 "  e.g. onoffsim analytic --kind cap --lambda 10 --q 0.1\n";
    return 2;
  }
  validate_or_throw(spec.net);
  AnalyticReport rep = analyze(spec.net);
  for (const auto& w : rep.warnings) std::cerr << "warning: " << w << "\n";

  std::ostringstream csv;
  csv << "quantity,value\n";
  auto row = [&](const char* q, double v) {
    csv << q << "," << fmt_double(v) << "\n";
    std::cout << q << " = " << fmt_double(v) << "\n";
  };
  std::cout << "kind=" << to_string(spec.net.arrivals.kind)
            << " lambda=" << fmt_double(spec.net.arrivals.mean_interarrival)
            << " q=" << fmt_double(spec.net.policy.activation_prob()) << " n=" << spec.net.n
            << "\n";
  row("delta", rep.delta);
  row("drop_prob", rep.drop_prob);
  row("interference_mean", rep.interference_mean);
  row("interference_var_bound", rep.interference_var_bound);
  row("throughput_approx", rep.throughput_approx);
  row("throughput_lower", rep.throughput_lower);
  row("throughput_upper", rep.throughput_upper);

  write_file(out_path(g, "analytic.csv"), csv.str());
  emit_manifest(g, spec, "analytic", "analytic.csv", {"analytic.csv"});
  std::cout << "wrote " << out_path(g, "analytic.csv") << "\n";
  return 0;
}

static std::string stats_csv(const std::vector<StatRow>& rows) {
  std::ostringstream os;
  os << "link_id,delta_hat,drop_hat,activation_hat,throughput_nats,mean_delay,p95_delay\n";
  for (const auto& r : rows) {
    os << r.id << "," << fmt_double(r.v[0]) << "," << fmt_double(r.v[1]) << ","
       << fmt_double(r.v[2]) << "," << fmt_double(r.v[3]) << ",";
    if (r.has_delay)
      os << fmt_double(r.v[4]) << "," << fmt_double(r.v[5]);
    else
      os << ",";
    os << "\n";
  }
  return os.str();
}

int cmd_simulate(const GlobalOpts& g, RunSpec spec) {
  validate_or_throw(spec.net);
  set_jobs(g.jobs);
  ReplicationResult res = run_replications(spec.net, spec.replications);

  std::vector<std::string> outputs = {"stats.csv"};
  write_file(out_path(g, "stats.csv"), stats_csv(res.mean));
  if (res.count > 1) {
    write_file(out_path(g, "stats_stderr.csv"), stats_csv(res.se));
    outputs.push_back("stats_stderr.csv");
  }
  emit_manifest(g, spec, "simulate", "stats.csv", outputs);

  const StatRow& net = res.mean.back();
  std::cout << "n=" << spec.net.n << " kind=" << to_string(spec.net.arrivals.kind)
            << " lambda=" << fmt_double(spec.net.arrivals.mean_interarrival)
            << " q=" << fmt_double(spec.net.policy.activation_prob())
            << " slots=" << res.rep0.measured_slots << " replications=" << res.count << "\n";
  std::cout << "delta_hat=" << fmt_double(net.v[0]) << " drop_hat=" << fmt_double(net.v[1])
            << " activation_hat=" << fmt_double(net.v[2])
            << " throughput_nats=" << fmt_double(net.v[3]) << "\n";
  for (const auto& o : outputs) std::cout << "wrote " << out_path(g, o) << "\n";
  return 0;
}

int cmd_validate(const GlobalOpts& g, RunSpec spec) {
  validate_or_throw(spec.net);
  set_jobs(g.jobs);
  SimStats stats = run(spec.net);
  AnalyticReport rep = analyze(spec.net);
  std::vector<ValidationRow> rows = compare(stats, rep);

  std::ostringstream csv;
  csv << "quantity,analytic,empirical,stderr,z,pass\n";
  bool all = true;
  for (const auto& r : rows) {
    all = all && r.pass;
    csv << r.quantity << "," << fmt_double(r.analytic) << "," << fmt_double(r.empirical) << ","
        << fmt_double(r.standard_error) << "," << fmt_double(r.z_score) << ","
        << (r.pass ? "true" : "false") << "\n";
    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.quantity
              << " analytic=" << fmt_double(r.analytic)
              << " empirical=" << fmt_double(r.empirical) << " z=" << fmt_double(r.z_score)
              << "\n";
  }
  write_file(out_path(g, "validation.csv"), csv.str());
  emit_manifest(g, spec, "validate", "validation.csv", {"validation.csv"});
  std::cout << (all ? "all rows pass" : "validation failed") << "\n";
  return all ? 0 : 1;
}

int cmd_optimize(const GlobalOpts& g, RunSpec spec) {
  const NetworkConfig& n = spec.net;
  Kind kind = n.arrivals.kind;
  double lambda = n.arrivals.mean_interarrival;
  double ah = n.channel.alpha_hat();

  OptimumResult num = optimize_q_numeric(kind, n.n, ah, lambda);
  OptimumResult asym = q_opt_asymptotic(kind, n.n, ah, lambda);

  std::ostringstream csv;
  csv << "method,regime,q_star,tau_star,t_eff_star,foc_residual,non_unimodal,fallback\n";
  auto row = [&](const OptimumResult& r) {
    csv << to_string(r.method) << "," << to_string(r.regime) << "," << fmt_double(r.q_star)
        << "," << fmt_double(r.tau_star) << "," << fmt_double(r.t_eff_star) << ","
        << fmt_double(r.foc_residual) << "," << (r.non_unimodal ? "true" : "false") << ","
        << (r.fallback ? "true" : "false") << "\n";
    std::cout << to_string(r.method) << ": q_star=" << fmt_double(r.q_star)
              << " tau_star=" << fmt_double(r.tau_star)
              << " t_eff=" << fmt_double(r.t_eff_star) << " regime=" << to_string(r.regime)
              << " foc_residual=" << fmt_double(r.foc_residual) << "\n";
  };
  std::cout << "kind=" << to_string(kind) << " n=" << n.n << " alpha_hat=" << fmt_double(ah)
            << " lambda=" << fmt_double(lambda) << "\n";
  row(num);
  row(asym);
  write_file(out_path(g, "optimum.csv"), csv.str());
  emit_manifest(g, spec, "optimize", "optimum.csv", {"optimum.csv"});
  std::cout << "wrote " << out_path(g, "optimum.csv") << "\n";
  return 0;
}

// ---- sweep ----

namespace {

struct SweepRow {
  double value = 0;
  Kind kind = Kind::cap;
  std::string quantity;
  bool has_analytic = false;
  double analytic = 0;
  bool has_sim = false;
  double simulated = 0, se = 0;
  std::string skipped;
};

std::vector<double> parse_grid(const std::string& s) {
  std::istringstream is(s);
  std::string a, b, c;
  if (!std::getline(is, a, ':') || !std::getline(is, b, ':') || !std::getline(is, c))
    throw std::invalid_argument("sweep grid: expected min:max:points, got '" + s + "'");
  double lo = std::stod(a), hi = std::stod(b);
  long pts = std::stol(c);
  if (!(lo > 0) || !(hi >= lo) || pts < 1)
    throw std::invalid_argument("sweep grid: need 0 < min <= max and points >= 1");
  std::vector<double> grid;
  grid.reserve((size_t)pts);
  if (pts == 1) {
    grid.push_back(lo);
    return grid;
  }
  double llo = std::log(lo), lhi = std::log(hi);
  for (long i = 0; i < pts; ++i) grid.push_back(std::exp(llo + (lhi - llo) * i / (pts - 1)));
  // the endpoints are part of the request; don't let exp(log(x)) perturb them
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

std::vector<Kind> parse_kinds(const RunSpec& spec) {
  if (spec.sweep_kinds.empty()) return {spec.net.arrivals.kind};
  std::vector<Kind> out;
  std::istringstream is(spec.sweep_kinds);
  std::string tok;
  while (std::getline(is, tok, ',')) out.push_back(kind_from_string(tok));
  if (out.empty()) throw std::invalid_argument("sweep kinds: empty list");
  return out;
}

// invert the monotone drop-probability curve at fixed lambda
double q_for_drop(Kind kind, double lambda, double eps) {
  double lo = 1e-9, hi = 1.0 - 1e-9;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (drop_prob(kind, lambda, mid) > eps)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

int cmd_sweep(const GlobalOpts& g, RunSpec spec) {
  if (spec.sweep_axis.empty()) {
    std::cerr << "sweep: --axis {lambda|epsilon|q} is required\n";
    return 2;
  }
  set_jobs(g.jobs);
  const NetworkConfig& net = spec.net;
  double ah = net.channel.alpha_hat();
  double eps = spec.sweep_epsilon;
  std::vector<Kind> kinds = parse_kinds(spec);

  if (spec.sweep_grid.empty()) {
    if (spec.sweep_axis == "lambda") spec.sweep_grid = "2:20000:41";
    else if (spec.sweep_axis == "epsilon") spec.sweep_grid = "0.001:0.5:25";
    else spec.sweep_grid = "0.001:0.9:41";
  }
  std::vector<double> grid = parse_grid(spec.sweep_grid);

  std::vector<SweepRow> rows;
  if (spec.sweep_axis == "lambda") {
    for (Kind kind : kinds) {
      std::vector<TradeoffPoint> curve = tradeoff_curve(kind, net.n, ah, eps, grid);
      for (const TradeoffPoint& p : curve) {
        SweepRow r;
        r.value = p.lambda;
        r.kind = kind;
        r.quantity = "t_eff";
        if (p.skipped) {
          r.skipped = "domain";
        } else {
          r.has_analytic = true;
          r.analytic = p.t_eff;
          bool integral = std::abs(p.lambda - std::round(p.lambda)) < 1e-9;
          if (spec.sweep_with_sim && (kind != Kind::cap || integral)) {
            NetworkConfig c = net;
            c.arrivals.kind = kind;
            c.arrivals.mean_interarrival =
                kind == Kind::cap ? std::round(p.lambda) : p.lambda;
            c.policy = OnOffPolicy::from_q(q_for_drop(kind, c.arrivals.mean_interarrival, eps));
            c.rate_mode = RateMode::threshold;
            c.warmup = -1;
            SimStats s = run(c);
            r.has_sim = true;
            r.simulated = s.network_throughput;
            r.se = batch_mean_se(s.throughput_batch);
          }
        }
        rows.push_back(std::move(r));
      }
    }
  } else if (spec.sweep_axis == "epsilon") {
    double qv = net.policy.activation_prob();
    for (Kind kind : kinds) {
      for (double e : grid) {
        SweepRow le;
        le.value = e;
        le.kind = kind;
        le.quantity = "lambda_eps";
        try {
          le.analytic = lambda_epsilon(kind, qv, e);
          le.has_analytic = true;
        } catch (const std::domain_error&) {
          le.skipped = "domain";
        }
        rows.push_back(std::move(le));

        SweepRow dg;
        dg.value = e;
        dg.kind = kind;
        dg.quantity = "degradation";
        try {
          dg.analytic = degradation(kind, e, ah);
          dg.has_analytic = true;
        } catch (const std::domain_error&) {
          dg.skipped = "domain";
        }
        rows.push_back(std::move(dg));
      }
    }
  } else {  // axis q
    double lambda = net.arrivals.mean_interarrival;
    for (Kind kind : kinds) {
      for (double qv : grid) {
        bool ok = qv > 0.0 && qv <= 1.0;
        SimStats s;
        bool have_run = false;
        if (ok && spec.sweep_with_sim) {
          NetworkConfig c = net;
          c.arrivals.kind = kind;
          c.policy = OnOffPolicy::from_q(qv);
          s = run(c);
          have_run = true;
        }
        auto push = [&](const char* quantity, double analytic, double sim, double se) {
          SweepRow r;
          r.value = qv;
          r.kind = kind;
          r.quantity = quantity;
          if (!ok) {
            r.skipped = "domain";
          } else {
            r.has_analytic = true;
            r.analytic = analytic;
            if (have_run) {
              r.has_sim = true;
              r.simulated = sim;
              r.se = se;
            }
          }
          rows.push_back(std::move(r));
        };
        double delta = ok ? full_buffer_prob(kind, lambda, qv) : 0;
        push("delta", delta, have_run ? s.empirical_delta : 0,
             have_run ? batch_mean_se(s.delta_batch) : 0);
        double dse = 0;
        if (have_run) {
          long arr = 0, drp = 0;
          for (const auto& t : s.links) {
            arr += t.arrived;
            drp += t.dropped;
          }
          dse = arr > 0 ? binomial_ci(drp, arr).standard_error : 0;
        }
        push("drop_prob", ok ? drop_prob(kind, lambda, qv) : 0,
             have_run ? s.empirical_drop_prob : 0, dse);
        push("t_eff", ok ? throughput_objective(kind, net.n, ah, lambda, qv) : 0,
             have_run ? s.network_throughput : 0,
             have_run ? batch_mean_se(s.throughput_batch) : 0);
      }
    }
  }

  bool any_live = false;
  for (const auto& r : rows) any_live = any_live || r.skipped.empty();
  if (rows.empty() || !any_live) {
    std::cerr << "sweep: empty effective grid (all points skipped)\n";
    return 2;
  }

  std::ostringstream csv;
  csv << "axis,value,kind,quantity,analytic,simulated,stderr,skipped\n";
  for (const auto& r : rows) {
    csv << spec.sweep_axis << "," << fmt_double(r.value) << "," << to_string(r.kind) << ","
        << r.quantity << ",";
    if (r.has_analytic) csv << fmt_double(r.analytic);
    csv << ",";
    if (r.has_sim) csv << fmt_double(r.simulated);
    csv << ",";
    if (r.has_sim) csv << fmt_double(r.se);
    csv << "," << r.skipped << "\n";
  }
  std::vector<std::string> outputs = {"sweep.csv"};
  write_file(out_path(g, "sweep.csv"), csv.str());

  if (g.svg) {
    std::vector<Series> series;
    for (Kind kind : kinds) {
      std::set<std::string> quantities;
      for (const auto& r : rows)
        if (r.kind == kind) quantities.insert(r.quantity);
      for (const auto& qname : quantities) {
        Series line;
        line.name = std::string(to_string(kind)) + " " + qname;
        Series dots;
        dots.name = line.name + " (sim)";
        dots.markers = true;
        for (const auto& r : rows) {
          if (r.kind != kind || r.quantity != qname) continue;
          if (r.has_analytic) line.pts.emplace_back(r.value, r.analytic);
          if (r.has_sim) dots.pts.emplace_back(r.value, r.simulated);
        }
        if (!line.pts.empty()) series.push_back(std::move(line));
        if (!dots.pts.empty()) series.push_back(std::move(dots));
      }
    }
    write_file(out_path(g, "sweep.svg"),
               render_line_chart("sweep: " + spec.sweep_axis, spec.sweep_axis, "value", true,
                                 series));
    outputs.push_back("sweep.svg");
  }
  emit_manifest(g, spec, "sweep", "sweep.csv", outputs);
  std::cout << "wrote " << out_path(g, "sweep.csv") << " (" << rows.size() << " rows)\n";
  if (g.svg) std::cout << "wrote " << out_path(g, "sweep.svg") << "\n";
  return 0;
}

}  // namespace onoff::cli
