#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "../src/cli.hpp"
#include "onoff/csvfmt.hpp"

using onoff::cli::GlobalOpts;
using onoff::cli::RunSpec;

namespace {

// subcommand convenience flags, folded into the config as the last layer
struct SubFlags {
  CLI::Option* kind = nullptr;
  CLI::Option* lambda = nullptr;
  CLI::Option* q = nullptr;
  CLI::Option* tau = nullptr;
  CLI::Option* n = nullptr;
  CLI::Option* alpha_hat = nullptr;
  std::string kind_v, q_v, tau_v, lambda_v, n_v, alpha_hat_v;

  void attach(CLI::App* cmd, bool with_channel) {
    kind = cmd->add_option("--kind", kind_v, "arrival process: pap, bap, or cap");
    lambda = cmd->add_option("--lambda", lambda_v, "mean interarrival time in slots");
    q = cmd->add_option("--q", q_v, "activation probability target in (0,1]");
    tau = cmd->add_option("--tau", tau_v, "activation threshold (overrides --q)");
    n = cmd->add_option("--n", n_v, "number of links");
    if (with_channel)
      alpha_hat = cmd->add_option("--alpha-hat", alpha_hat_v,
                                  "effective cross-link coefficient alpha * E[beta]");
  }

  void fold(RunSpec& spec) const {
    if (kind && kind->count()) onoff::cli::apply_kv(spec, "arrivals.kind", kind_v);
    if (lambda && lambda->count()) onoff::cli::apply_kv(spec, "arrivals.lambda", lambda_v);
    if (n && n->count()) onoff::cli::apply_kv(spec, "n", n_v);
    if (alpha_hat && alpha_hat->count()) onoff::cli::apply_kv(spec, "alpha_hat", alpha_hat_v);
    if (q && q->count()) onoff::cli::apply_kv(spec, "policy.q", q_v);
    if (tau && tau->count()) onoff::cli::apply_kv(spec, "policy.tau", tau_v);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"on-off threshold network: analytics, Monte Carlo simulation, sweeps"};
  app.set_version_flag("--version", onoff::cli::kToolVersion);
  app.fallthrough();
  app.require_subcommand(1);

  GlobalOpts g;
  std::uint64_t seed_v = 0;
  app.add_option("--config", g.config_path, "config file (key = value lines)");
  app.add_option("--set", g.sets, "override a config key, e.g. --set n=1 (repeatable)");
  CLI::Option* seed_opt = app.add_option("--seed", seed_v, "base RNG seed");
  app.add_option("--out", g.out_dir, "output directory (default .)");
  app.add_option("--jobs", g.jobs, "worker thread limit");
  app.add_flag("--svg", g.svg, "also render an SVG plot where supported");

  CLI::App* c_analytic = app.add_subcommand("analytic", "closed-form quantities for one config");
  CLI::App* c_simulate = app.add_subcommand("simulate", "Monte Carlo run, per-link stats CSV");
  CLI::App* c_sweep = app.add_subcommand("sweep", "analytic (and simulated) curves over a grid");
  CLI::App* c_validate =
      app.add_subcommand("validate", "simulate and test against closed forms; exit 1 on failure");
  CLI::App* c_optimize = app.add_subcommand("optimize", "numeric and asymptotic optimal q");

  SubFlags f_analytic, f_simulate, f_sweep, f_validate, f_optimize;
  f_analytic.attach(c_analytic, false);
  f_simulate.attach(c_simulate, false);
  f_sweep.attach(c_sweep, true);
  f_validate.attach(c_validate, false);
  f_optimize.attach(c_optimize, true);

  int replications_v = 0;
  CLI::Option* rep_opt =
      c_simulate->add_option("--replications", replications_v, "independent replications");

  std::string axis_v, grid_v, kinds_v;
  double epsilon_v = 0;
  CLI::Option* axis_opt =
      c_sweep->add_option("--axis", axis_v, "sweep axis: lambda, epsilon, or q");
  CLI::Option* grid_opt = c_sweep->add_option("--grid", grid_v, "min:max:points (log-spaced)");
  CLI::Option* eps_opt =
      c_sweep->add_option("--epsilon", epsilon_v, "drop-probability target for lambda sweeps");
  CLI::Option* kinds_opt =
      c_sweep->add_option("--kinds", kinds_v, "comma-separated arrival kinds to sweep");
  bool with_sim_v = false;
  CLI::Option* with_sim_opt =
      c_sweep->add_flag("--with-sim", with_sim_v, "add simulated columns next to analytic ones");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  if (seed_opt->count()) g.seed = seed_v;

  try {
    RunSpec spec = onoff::cli::build_spec(g);
    if (c_analytic->parsed()) {
      f_analytic.fold(spec);
      return onoff::cli::cmd_analytic(g, std::move(spec));
    }
    if (c_simulate->parsed()) {
      f_simulate.fold(spec);
      if (rep_opt->count())
        onoff::cli::apply_kv(spec, "replications", std::to_string(replications_v));
      return onoff::cli::cmd_simulate(g, std::move(spec));
    }
    if (c_sweep->parsed()) {
      f_sweep.fold(spec);
      if (axis_opt->count()) onoff::cli::apply_kv(spec, "sweep.axis", axis_v);
      if (grid_opt->count()) onoff::cli::apply_kv(spec, "sweep.grid", grid_v);
      if (eps_opt->count())
        onoff::cli::apply_kv(spec, "sweep.epsilon", onoff::fmt_double(epsilon_v));
      if (kinds_opt->count()) onoff::cli::apply_kv(spec, "sweep.kinds", kinds_v);
      if (with_sim_opt->count()) onoff::cli::apply_kv(spec, "sweep.with_sim", "1");
      return onoff::cli::cmd_sweep(g, std::move(spec));
    }
    if (c_validate->parsed()) {
      f_validate.fold(spec);
      return onoff::cli::cmd_validate(g, std::move(spec));
    }
    f_optimize.fold(spec);
    return onoff::cli::cmd_optimize(g, std::move(spec));
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::logic_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
