#pragma once
// Threshold selection: numeric maximization of the throughput approximation,
// the asymptotic fixed-point solutions, and the delay/throughput tradeoff
// quantities (lambda_epsilon, lambda_opt, degradation, tradeoff curves).

#include <vector>

#include "onoff/model.hpp"

namespace onoff {

enum class OptMethod { numeric, asymptotic };
enum class Regime { case1, case2, case3, na };

const char* to_string(OptMethod m);
const char* to_string(Regime r);

struct OptimumResult {
  double q_star = 0;
  double tau_star = 0;  // -log(q_star)
  double t_eff_star = 0;
  OptMethod method = OptMethod::numeric;
  Regime regime = Regime::na;  // CAP Psi classification
  double foc_residual = 0;     // relative residual of the first-order condition
  bool non_unimodal = false;   // refinement grid saw separated local maxima
  bool fallback = false;       // asymptotic branch invalid, numeric result returned
};

// objective: f(q) = n * q * Delta(q) * log(1 + (-log q) / (n * alpha_hat * q * Delta(q)))
double throughput_objective(Kind kind, int n, double alpha_hat, double lambda, double q);

// relative residual of n*ah*q*Delta^2 = (Delta - dDelta/dtau) * tau^2
double foc_residual(Kind kind, int n, double alpha_hat, double lambda, double q);

OptimumResult optimize_q_numeric(Kind kind, int n, double alpha_hat, double lambda);

// root of n_alpha_hat * e^(-tau) = tau^2 with tau > 1, residual < 1e-10
double solve_tau_fixed_point(double n_alpha_hat);

OptimumResult q_opt_asymptotic(Kind kind, int n, double alpha_hat, double lambda);

// interarrival achieving drop probability epsilon at fixed q.
// Default is the first-order small-q form; exact_form selects the direct inversion
// of the drop formula (identical for BAP, where the algebra cancels).
double lambda_epsilon(Kind kind, double q, double epsilon, bool exact_form = false);

double lambda_opt(Kind kind, int n, double alpha_hat, double epsilon);

double degradation(Kind kind, double epsilon, double alpha_hat);

struct TradeoffPoint {
  double lambda = 0;
  double t_eff = 0;
  bool skipped = false;  // grid point outside the formula's domain
};
std::vector<TradeoffPoint> tradeoff_curve(Kind kind, int n, double alpha_hat, double epsilon,
                                          const std::vector<double>& lambda_grid);

}  // namespace onoff
