#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "cli.hpp"
#include "onoff/csvfmt.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace onoff::cli {

void set_jobs(int jobs) {
#ifdef _OPENMP
  if (jobs > 0) omp_set_num_threads(jobs);
#else
  (void)jobs;
#endif
}

static std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

static double parse_double(const std::string& key, const std::string& v) {
  double x = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size())
    throw std::invalid_argument(key + ": bad number '" + v + "'");
  return x;
}

static long parse_long(const std::string& key, const std::string& v) {
  long x = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size())
    throw std::invalid_argument(key + ": bad integer '" + v + "'");
  return x;
}

static std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  std::uint64_t x = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size())
    throw std::invalid_argument(key + ": bad unsigned integer '" + v + "'");
  return x;
}

static bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true") return true;
  if (v == "0" || v == "false") return false;
  throw std::invalid_argument(key + ": bad boolean '" + v + "'");
}

std::vector<std::pair<std::string, std::string>> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config: " + path);
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string t = trim(line);
    if (t.empty()) continue;
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty())
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": empty key");
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

void apply_kv(RunSpec& spec, const std::string& key, const std::string& value) {
  NetworkConfig& n = spec.net;
  if (key == "n") {
    n.n = (int)parse_long(key, value);
  } else if (key == "horizon") {
    n.horizon = parse_long(key, value);
  } else if (key == "warmup") {
    n.warmup = parse_long(key, value);
  } else if (key == "seed") {
    n.seed = parse_u64(key, value);
  } else if (key == "rate_mode") {
    if (value == "instantaneous") n.rate_mode = RateMode::instantaneous;
    else if (value == "threshold") n.rate_mode = RateMode::threshold;
    else throw std::invalid_argument("rate_mode: expected instantaneous or threshold");
  } else if (key == "replications") {
    long r = parse_long(key, value);
    if (r < 1) throw std::invalid_argument("replications: must be >= 1");
    spec.replications = (int)r;
  } else if (key == "arrivals.kind") {
    n.arrivals.kind = kind_from_string(value);
  } else if (key == "arrivals.lambda") {
    n.arrivals.mean_interarrival = parse_double(key, value);
  } else if (key == "arrivals.phase_policy") {
    if (value == "uniform_random") n.arrivals.phase_policy = PhasePolicy::uniform_random;
    else if (value == "fixed") n.arrivals.phase_policy = PhasePolicy::fixed;
    else throw std::invalid_argument("arrivals.phase_policy: expected uniform_random or fixed");
  } else if (key == "arrivals.phase_offset") {
    n.arrivals.phase_offset = parse_long(key, value);
  } else if (key == "channel.alpha") {
    n.channel.alpha = parse_double(key, value);
  } else if (key == "channel.noise_power") {
    n.channel.noise_power = parse_double(key, value);
  } else if (key == "channel.shadowing.kind") {
    if (value == "lognormal") n.channel.shadowing.kind = ShadowKind::lognormal;
    else if (value == "constant") n.channel.shadowing.kind = ShadowKind::constant;
    else if (value == "bounded_uniform") n.channel.shadowing.kind = ShadowKind::bounded_uniform;
    else throw std::invalid_argument("channel.shadowing.kind: unknown kind '" + value + "'");
  } else if (key == "channel.shadowing.mean") {
    n.channel.shadowing.mean = parse_double(key, value);
  } else if (key == "channel.shadowing.variance") {
    n.channel.shadowing.variance = parse_double(key, value);
  } else if (key == "channel.shadowing.lower") {
    n.channel.shadowing.lower = parse_double(key, value);
  } else if (key == "channel.shadowing.upper") {
    n.channel.shadowing.upper = parse_double(key, value);
  } else if (key == "policy.q") {
    double q = parse_double(key, value);
    if (!(q > 0.0 && q <= 1.0)) throw std::invalid_argument("policy.q: out of (0,1]");
    n.policy = OnOffPolicy::from_q(q);
    spec.assigned.erase("policy.tau");
  } else if (key == "policy.tau") {
    n.policy.threshold = parse_double(key, value);
    spec.assigned.erase("policy.q");
  } else if (key == "alpha_hat") {
    // direct control of the product alpha * E[beta]
    n.channel.alpha = parse_double(key, value);
    n.channel.shadowing = ShadowingSpec::constant_spec(1.0);
    spec.assigned.insert("channel.alpha");
    spec.assigned.insert("channel.shadowing.kind");
    spec.assigned.insert("channel.shadowing.mean");
  } else if (key == "sweep.axis") {
    if (value != "lambda" && value != "epsilon" && value != "q")
      throw std::invalid_argument("sweep.axis: expected lambda, epsilon, or q");
    spec.sweep_axis = value;
  } else if (key == "sweep.grid") {
    spec.sweep_grid = value;
  } else if (key == "sweep.epsilon") {
    spec.sweep_epsilon = parse_double(key, value);
  } else if (key == "sweep.with_sim") {
    spec.sweep_with_sim = parse_bool(key, value);
  } else if (key == "sweep.kinds") {
    spec.sweep_kinds = value;
  } else {
    throw std::invalid_argument("unknown config key: " + key);
  }
  spec.assigned.insert(key);
}

RunSpec build_spec(const GlobalOpts& g) {
  RunSpec spec;
  if (!g.config_path.empty())
    for (const auto& [k, v] : parse_config_file(g.config_path)) apply_kv(spec, k, v);
  for (const std::string& s : g.sets) {
    size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("--set expects key=value, got '" + s + "'");
    apply_kv(spec, trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
  }
  if (g.seed) {
    spec.net.seed = *g.seed;
    spec.assigned.insert("seed");
  }
  return spec;
}

std::string manifest_text(const RunSpec& spec, const std::string& command,
                          const std::vector<std::string>& outputs) {
  const NetworkConfig& n = spec.net;
  std::ostringstream os;
  os << "# onoffsim " << kToolVersion << "\n";
  os << "# command: " << command << "\n";
  {
    std::time_t tt = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::tm tm{};
    gmtime_r(&tt, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    os << "# created: " << buf << "\n";
  }
  os << "# outputs:";
  for (const auto& o : outputs) os << " " << o;
  os << "\n";

  // sorted key = value lines; values round-trip exactly
  std::vector<std::pair<std::string, std::string>> kv;
  kv.emplace_back("arrivals.kind", to_string(n.arrivals.kind));
  kv.emplace_back("arrivals.lambda", fmt_double(n.arrivals.mean_interarrival));
  kv.emplace_back("arrivals.phase_offset", std::to_string(n.arrivals.phase_offset));
  // config tokens, not display names: these lines must re-parse via apply_kv
  kv.emplace_back("arrivals.phase_policy",
                  n.arrivals.phase_policy == PhasePolicy::fixed ? "fixed" : "uniform_random");
  kv.emplace_back("channel.alpha", fmt_double(n.channel.alpha));
  kv.emplace_back("channel.noise_power", fmt_double(n.channel.noise_power));
  const char* shadow_token = n.channel.shadowing.kind == ShadowKind::lognormal ? "lognormal"
                             : n.channel.shadowing.kind == ShadowKind::constant
                                 ? "constant"
                                 : "bounded_uniform";
  kv.emplace_back("channel.shadowing.kind", shadow_token);
  kv.emplace_back("channel.shadowing.mean", fmt_double(n.channel.shadowing.mean));
  if (n.channel.shadowing.kind == ShadowKind::lognormal)
    kv.emplace_back("channel.shadowing.variance", fmt_double(n.channel.shadowing.variance));
  if (n.channel.shadowing.kind == ShadowKind::bounded_uniform) {
    kv.emplace_back("channel.shadowing.lower", fmt_double(n.channel.shadowing.lower));
    kv.emplace_back("channel.shadowing.upper", fmt_double(n.channel.shadowing.upper));
  }
  kv.emplace_back("horizon", std::to_string(n.horizon));
  kv.emplace_back("n", std::to_string(n.n));
  kv.emplace_back("policy.tau", fmt_double(n.policy.threshold));
  kv.emplace_back("rate_mode", to_string(n.rate_mode));
  kv.emplace_back("seed", std::to_string(n.seed));
  kv.emplace_back("warmup", std::to_string(n.warmup));
  if (command == "simulate") kv.emplace_back("replications", std::to_string(spec.replications));
  if (command == "sweep") {
    kv.emplace_back("sweep.axis", spec.sweep_axis);
    kv.emplace_back("sweep.grid", spec.sweep_grid);
    kv.emplace_back("sweep.epsilon", fmt_double(spec.sweep_epsilon));
    kv.emplace_back("sweep.with_sim", spec.sweep_with_sim ? "1" : "0");
    if (!spec.sweep_kinds.empty()) kv.emplace_back("sweep.kinds", spec.sweep_kinds);
  }
  std::sort(kv.begin(), kv.end());
  for (const auto& [k, v] : kv) os << k << " = " << v << "\n";
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write: " + path);
  out << content;
  if (!out) throw std::invalid_argument("write failed: " + path);
}

}  // namespace onoff::cli
