#pragma once
// Command-line front end internals: config layering (defaults <- file <-
// --set/flags), manifest emission, and the five subcommands. Kept out of the
// public headers; only tools/main.cpp and the CLI tests care.

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "onoff/model.hpp"

namespace onoff::cli {

inline constexpr const char* kToolVersion = "1.0.0";

struct RunSpec {
  NetworkConfig net;
  int replications = 1;
  std::string sweep_axis;   // lambda | epsilon | q
  std::string sweep_grid;   // min:max:points, log-spaced
  double sweep_epsilon = 0.05;
  bool sweep_with_sim = false;
  std::string sweep_kinds;  // comma-separated; empty -> config's kind
  std::set<std::string> assigned;  // keys explicitly set by file/--set/flags
};

struct GlobalOpts {
  std::string config_path;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  int jobs = 0;
  bool svg = false;
};

// file order preserved; throws std::invalid_argument with path:line context
std::vector<std::pair<std::string, std::string>> parse_config_file(const std::string& path);

// one key = value assignment; policy.q and policy.tau address the same knob
// (last assignment wins). Unknown keys and bad values throw.
void apply_kv(RunSpec& spec, const std::string& key, const std::string& value);

RunSpec build_spec(const GlobalOpts& g);

std::string manifest_text(const RunSpec& spec, const std::string& command,
                          const std::vector<std::string>& outputs);

void set_jobs(int jobs);
void write_file(const std::string& path, const std::string& content);

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> pts;
  bool markers = false;  // draw point markers instead of a line
};
std::string render_line_chart(const std::string& title, const std::string& xlabel,
                              const std::string& ylabel, bool log_x,
                              const std::vector<Series>& series);

int cmd_analytic(const GlobalOpts& g, RunSpec spec);
int cmd_simulate(const GlobalOpts& g, RunSpec spec);
int cmd_sweep(const GlobalOpts& g, RunSpec spec);
int cmd_validate(const GlobalOpts& g, RunSpec spec);
int cmd_optimize(const GlobalOpts& g, RunSpec spec);

}  // namespace onoff::cli
