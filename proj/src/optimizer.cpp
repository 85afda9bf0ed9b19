#include "onoff/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "onoff/analytics.hpp"

namespace onoff {

const char* to_string(OptMethod m) { return m == OptMethod::numeric ? "numeric" : "asymptotic"; }

const char* to_string(Regime r) {
  switch (r) {
    case Regime::case1: return "case1";
    case Regime::case2: return "case2";
    case Regime::case3: return "case3";
    case Regime::na: return "n/a";
  }
  return "?";
}

double throughput_objective(Kind kind, int n, double alpha_hat, double lambda, double q) {
  return network_throughput_approx(n, alpha_hat, q, full_buffer_prob(kind, lambda, q));
}

// dDelta/dtau from the closed forms (q = e^-tau, dq/dtau = -q)
static double ddelta_dtau(Kind kind, double lambda, double q) {
  double delta = full_buffer_prob(kind, lambda, q);
  switch (kind) {
    case Kind::pap:
      return delta * delta * lambda * q / (1.0 - q);
    case Kind::bap:
      return delta * delta * (lambda - 1.0) * q;
    case Kind::cap: {
      double pow_lm1 = std::exp((lambda - 1.0) * std::log1p(-q));
      double one_minus = -std::expm1(lambda * std::log1p(-q));  // 1 - (1-q)^lambda
      return (one_minus - lambda * q * pow_lm1) / (lambda * q);
    }
  }
  return 0.0;
}

double foc_residual(Kind kind, int n, double alpha_hat, double lambda, double q) {
  double tau = -std::log(q);
  double delta = full_buffer_prob(kind, lambda, q);
  double lhs = (double)n * alpha_hat * q * delta * delta;
  double rhs = (delta - ddelta_dtau(kind, lambda, q)) * tau * tau;
  return std::abs(lhs - rhs) / lhs;
}

static void check_opt_pre(int n, double alpha_hat, double lambda) {
  if (n < 2) throw std::invalid_argument("n must be >= 2");
  if (!(alpha_hat > 0.0) || alpha_hat > 1.0) throw std::invalid_argument("alpha_hat out of (0,1]");
  if (!(lambda >= 1.0)) throw std::invalid_argument("lambda must be >= 1");
}

OptimumResult optimize_q_numeric(Kind kind, int n, double alpha_hat, double lambda) {
  check_opt_pre(n, alpha_hat, lambda);
  const double qlo = 1e-6, qhi = 0.999;
  const int grid_n = 241;

  auto f = [&](double q) { return throughput_objective(kind, n, alpha_hat, lambda, q); };

  std::vector<double> qs(grid_n), fs(grid_n);
  double lo = std::log(qlo), hi = std::log(qhi);
  for (int i = 0; i < grid_n; ++i) {
    qs[i] = std::exp(lo + (hi - lo) * i / (grid_n - 1));
    fs[i] = f(qs[i]);
  }

  int best = 0;
  for (int i = 1; i < grid_n; ++i)
    if (fs[i] > fs[best]) best = i;

  // separated interior local maxima indicate a non-unimodal objective
  int maxima = 0, last_at = -10;
  for (int i = 1; i + 1 < grid_n; ++i) {
    if (fs[i] > fs[i - 1] && fs[i] >= fs[i + 1]) {
      if (i - last_at > 2) ++maxima;
      last_at = i;
    }
  }

  double a = qs[std::max(0, best - 1)], b = qs[std::min(grid_n - 1, best + 1)];
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 200 && (b - a) > 1e-13; ++it) {
    if (f1 < f2) {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + gr * (b - a); f2 = f(x2);
    } else {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - gr * (b - a); f1 = f(x1);
    }
  }
  double q_star = 0.5 * (a + b);

  OptimumResult r;
  r.q_star = q_star;
  r.tau_star = -std::log(q_star);
  r.t_eff_star = f(q_star);
  r.method = OptMethod::numeric;
  r.regime = Regime::na;
  r.foc_residual = foc_residual(kind, n, alpha_hat, lambda, q_star);
  r.non_unimodal = maxima > 1;
  return r;
}

double solve_tau_fixed_point(double n_alpha_hat) {
  if (!(n_alpha_hat > 1.0))
    throw std::domain_error("solve_tau_fixed_point: n*alpha_hat must exceed 1");
  auto g = [&](double tau) { return n_alpha_hat * std::exp(-tau) - tau * tau; };
  double a = 1.0, b = std::log(n_alpha_hat) + 2.0;
  if (!(g(a) > 0.0))
    throw std::domain_error("solve_tau_fixed_point: no root with tau > 1 (need n*alpha_hat > e)");
  for (int it = 0; it < 200; ++it) {
    double m = 0.5 * (a + b);
    if (g(m) > 0.0) a = m; else b = m;
  }
  return 0.5 * (a + b);
}

OptimumResult q_opt_asymptotic(Kind kind, int n, double alpha_hat, double lambda) {
  check_opt_pre(n, alpha_hat, lambda);
  double na = (double)n * alpha_hat;

  OptimumResult r;
  r.method = OptMethod::asymptotic;
  r.regime = Regime::na;

  if (kind == Kind::cap) {
    double tau_fp = solve_tau_fixed_point(na);
    double psi = na / (tau_fp * tau_fp * lambda);
    if (psi >= 10.0) {
      r.regime = Regime::case1;
      r.q_star = std::exp(-tau_fp);
    } else if (psi > 0.1) {
      r.regime = Regime::case2;
      r.q_star = std::exp(-tau_fp);
    } else {
      r.regime = Regime::case3;
      double log_l = std::log(lambda);
      double arg = lambda * log_l * log_l / na;
      if (!(arg > 1.0)) {
        // asymptotic branch undefined; numeric optimizer is the fallback
        OptimumResult num = optimize_q_numeric(kind, n, alpha_hat, lambda);
        num.regime = Regime::case3;
        num.fallback = true;
        return num;
      }
      r.q_star = std::log(arg) / lambda;
    }
  } else {
    // Both PAP and BAP reduce to the same fixed point
    r.q_star = std::exp(-solve_tau_fixed_point(na));
  }

  r.tau_star = -std::log(r.q_star);
  r.t_eff_star = throughput_objective(kind, n, alpha_hat, lambda, r.q_star);
  r.foc_residual = foc_residual(kind, n, alpha_hat, lambda, r.q_star);
  return r;
}

double lambda_epsilon(Kind kind, double q, double epsilon, bool exact_form) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::domain_error("epsilon out of (0,1)");
  if (!(q > 0.0 && q < 1.0)) throw std::domain_error("q out of (0,1)");
  switch (kind) {
    case Kind::pap:
      if (exact_form) return (1.0 - epsilon) / (epsilon * (-std::log1p(-q)));
      return (1.0 / epsilon - 1.0) / q;
    case Kind::bap:
      // the small-q form is algebraically identical to the exact inversion
      return (1.0 - q) * (1.0 / epsilon - 1.0) / q;
    case Kind::cap:
      if (exact_form) return std::log(1.0 / epsilon) / (-std::log1p(-q));
      return std::log(1.0 / epsilon) / q;
  }
  return 0.0;
}

double lambda_opt(Kind kind, int n, double alpha_hat, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::domain_error("epsilon out of (0,1)");
  double na = (double)n * alpha_hat;
  double arg = (kind == Kind::cap) ? na * std::log(1.0 / epsilon) : na / epsilon;
  if (!(arg > 1.0)) throw std::domain_error("lambda_opt: argument of log^2 must exceed 1");
  double lg = std::log(arg);
  return na / (lg * lg);
}

double degradation(Kind kind, double epsilon, double alpha_hat) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::domain_error("epsilon out of (0,1)");
  double le = std::log(1.0 / epsilon);
  if (kind == Kind::cap) {
    if (le <= 1.0) throw std::domain_error("degradation: CAP needs epsilon < 1/e");
    return std::log(le) / alpha_hat;
  }
  return le / alpha_hat;
}

std::vector<TradeoffPoint> tradeoff_curve(Kind kind, int n, double alpha_hat, double epsilon,
                                          const std::vector<double>& lambda_grid) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::domain_error("epsilon out of (0,1)");
  double na = (double)n * alpha_hat;
  double le = std::log(1.0 / epsilon);
  std::vector<TradeoffPoint> out;
  out.reserve(lambda_grid.size());
  for (double l : lambda_grid) {
    TradeoffPoint p;
    p.lambda = l;
    if (kind == Kind::cap) {
      if (l <= le) {
        p.skipped = true;
      } else {
        p.t_eff = ((double)n / l) * std::log1p(l * std::log(l / le) / na);
      }
    } else {
      if (l * epsilon <= 1.0) {
        p.skipped = true;
      } else {
        p.t_eff = ((double)n / l) * std::log1p(l * std::log(l * epsilon) / na);
      }
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace onoff
