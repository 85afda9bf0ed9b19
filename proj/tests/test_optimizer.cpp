#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "onoff/analytics.hpp"
#include "onoff/optimizer.hpp"

using namespace onoff;

namespace {
constexpr int kN = 500;
constexpr double kAh = 0.2;       // n * alpha_hat = 100
constexpr double kTauStar = 2.6534493304844;  // root of 100 e^-tau = tau^2
constexpr double kQStar = 0.07040793349448116;
}  // namespace

TEST_CASE("fixed point of n_alpha_hat e^-tau = tau^2") {
  double tau = solve_tau_fixed_point(100.0);
  CHECK(tau == doctest::Approx(kTauStar).epsilon(1e-12));
  CHECK(std::abs(100.0 * std::exp(-tau) - tau * tau) < 1e-9);
  CHECK(std::exp(-tau) == doctest::Approx(kQStar).epsilon(1e-12));

  CHECK_THROWS_WITH_AS(solve_tau_fixed_point(0.5),
                       "solve_tau_fixed_point: n*alpha_hat must exceed 1", std::domain_error);
  CHECK_THROWS_WITH_AS(solve_tau_fixed_point(2.0),
                       "solve_tau_fixed_point: no root with tau > 1 (need n*alpha_hat > e)",
                       std::domain_error);
  CHECK_NOTHROW(solve_tau_fixed_point(3.0));
}

TEST_CASE("objective values at and around the fixed point") {
  // delta = 1 reference (lambda -> infinity limit of the objective shape is
  // probed separately; here BAP at lambda = 1 has delta identically 1)
  CHECK(full_buffer_prob(Kind::bap, 1.0, 0.3) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(throughput_objective(Kind::bap, kN, kAh, 1.0, kQStar) ==
        doctest::Approx(11.258626921212114).epsilon(1e-12));
  CHECK(throughput_objective(Kind::bap, kN, kAh, 1.0, 0.0704) ==
        doctest::Approx(11.258853241754668).epsilon(1e-12));
  CHECK(throughput_objective(Kind::bap, kN, kAh, 1.0, 2 * kQStar) ==
        doctest::Approx(9.176640408512108).epsilon(1e-12));
  CHECK(throughput_objective(Kind::bap, kN, kAh, 1.0, 0.5 * kQStar) ==
        doctest::Approx(11.760812054229072).epsilon(1e-12));
}

TEST_CASE("first order condition residual") {
  // BAP: the balance condition collapses algebraically onto the fixed point,
  // so the residual vanishes exactly at q_star for every lambda
  CHECK(foc_residual(Kind::bap, kN, kAh, 10.0, kQStar) < 1e-12);
  CHECK(foc_residual(Kind::bap, kN, kAh, 100.0, kQStar) < 1e-12);

  // PAP and CAP roots sit elsewhere (frozen by an independent bisection)
  CHECK(foc_residual(Kind::pap, kN, kAh, 10.0, 0.06933865639523074) < 1e-9);
  CHECK(foc_residual(Kind::pap, kN, kAh, 100.0, 0.061618038525028396) < 1e-9);
  CHECK(foc_residual(Kind::cap, kN, kAh, 100.0, 0.03708663887653628) < 1e-9);

  // away from the root the residual is order one
  CHECK(foc_residual(Kind::pap, kN, kAh, 10.0, 0.3) > 0.1);
}

TEST_CASE("numeric maximizer of the throughput approximation") {
  SUBCASE("pap lambda 10") {
    auto r = optimize_q_numeric(Kind::pap, kN, kAh, 10.0);
    CHECK(r.q_star == doctest::Approx(0.03902854657021069).epsilon(1e-6));
    CHECK(r.tau_star == doctest::Approx(-std::log(r.q_star)).epsilon(1e-12));
    CHECK(r.method == OptMethod::numeric);
    CHECK_FALSE(r.non_unimodal);
    CHECK_FALSE(r.fallback);
    CHECK(r.t_eff_star ==
          doctest::Approx(throughput_objective(Kind::pap, kN, kAh, 10.0, r.q_star)).epsilon(1e-12));
    // the maximizer dominates nearby probe points
    CHECK(r.t_eff_star >= throughput_objective(Kind::pap, kN, kAh, 10.0, kQStar));
    CHECK(r.t_eff_star >= throughput_objective(Kind::pap, kN, kAh, 10.0, 0.02));
    // residual of the approximate balance condition at the true maximizer
    CHECK(r.foc_residual == doctest::Approx(1.674).epsilon(0.01));
  }
  SUBCASE("pap lambda 100") {
    auto r = optimize_q_numeric(Kind::pap, kN, kAh, 100.0);
    CHECK(r.q_star == doctest::Approx(0.028319460093309747).epsilon(1e-6));
  }
  SUBCASE("bap lambda 10") {
    auto r = optimize_q_numeric(Kind::bap, kN, kAh, 10.0);
    CHECK(r.q_star == doctest::Approx(0.039472265460026176).epsilon(1e-6));
  }
  SUBCASE("bap lambda 100") {
    auto r = optimize_q_numeric(Kind::bap, kN, kAh, 100.0);
    CHECK(r.q_star == doctest::Approx(0.029414807033438385).epsilon(1e-6));
  }
  SUBCASE("cap maximizer dominates a probe grid") {
    auto r = optimize_q_numeric(Kind::cap, kN, kAh, 10.0);
    for (double q = 0.005; q < 0.9; q *= 1.5)
      CHECK(r.t_eff_star >= throughput_objective(Kind::cap, kN, kAh, 10.0, q) - 1e-12);
  }
  SUBCASE("input validation") {
    CHECK_THROWS_WITH_AS(optimize_q_numeric(Kind::pap, 1, kAh, 10.0), "n must be >= 2",
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(optimize_q_numeric(Kind::pap, kN, 0.0, 10.0), "alpha_hat out of (0,1]",
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(optimize_q_numeric(Kind::pap, kN, kAh, 0.5), "lambda must be >= 1",
                         std::invalid_argument);
  }
}

TEST_CASE("asymptotic threshold selection") {
  SUBCASE("pap and bap land on the fixed point") {
    for (Kind k : {Kind::pap, Kind::bap}) {
      auto r = q_opt_asymptotic(k, kN, kAh, 10.0);
      CHECK(r.q_star == doctest::Approx(kQStar).epsilon(1e-12));
      CHECK(r.tau_star == doctest::Approx(kTauStar).epsilon(1e-12));
      CHECK(r.method == OptMethod::asymptotic);
      CHECK(r.regime == Regime::na);
      CHECK_FALSE(r.fallback);
    }
  }
  SUBCASE("cap moderate lambda classifies as case2 and keeps the fixed point") {
    auto r = q_opt_asymptotic(Kind::cap, kN, kAh, 10.0);
    // Psi = 100 / (tau^2 * 10) = 1.42: between 0.1 and 10
    CHECK(r.regime == Regime::case2);
    CHECK(r.q_star == doctest::Approx(kQStar).epsilon(1e-12));
  }
  SUBCASE("cap small lambda classifies as case1") {
    auto r = q_opt_asymptotic(Kind::cap, kN, kAh, 1.0);
    // Psi = 100 / tau^2 = 14.2
    CHECK(r.regime == Regime::case1);
    CHECK(r.q_star == doctest::Approx(kQStar).epsilon(1e-12));
  }
  SUBCASE("cap large lambda switches to the log form") {
    auto r = q_opt_asymptotic(Kind::cap, kN, kAh, 2000.0);
    CHECK(r.regime == Regime::case3);
    CHECK_FALSE(r.fallback);
    CHECK(r.q_star == doctest::Approx(0.0035261331216962797).epsilon(1e-12));
    CHECK(r.tau_star == doctest::Approx(-std::log(r.q_star)).epsilon(1e-12));
  }
}

TEST_CASE("interarrival required to hold a drop target") {
  const double eps = 0.05;
  SUBCASE("default small-q forms at q_star") {
    CHECK(lambda_epsilon(Kind::pap, kQStar, eps) ==
          doctest::Approx(269.8559531148474).epsilon(1e-12));
    CHECK(lambda_epsilon(Kind::bap, kQStar, eps) ==
          doctest::Approx(250.85595311484735).epsilon(1e-12));
    CHECK(lambda_epsilon(Kind::cap, kQStar, eps) ==
          doctest::Approx(42.54822041878005).epsilon(1e-12));
  }
  SUBCASE("exact inversions") {
    CHECK(lambda_epsilon(Kind::pap, kQStar, eps, true) ==
          doctest::Approx(260.2403651234661).epsilon(1e-12));
    CHECK(lambda_epsilon(Kind::cap, kQStar, eps, true) ==
          doctest::Approx(41.03212950957063).epsilon(1e-12));
    // BAP algebra cancels: both forms coincide
    CHECK(lambda_epsilon(Kind::bap, kQStar, eps, true) ==
          lambda_epsilon(Kind::bap, kQStar, eps, false));
  }
  SUBCASE("exact forms invert the drop formula") {
    for (double q : {0.03, 0.1, 0.3}) {
      CHECK(drop_prob(Kind::pap, lambda_epsilon(Kind::pap, q, eps, true), q) ==
            doctest::Approx(eps).epsilon(1e-12));
      CHECK(drop_prob(Kind::bap, lambda_epsilon(Kind::bap, q, eps, true), q) ==
            doctest::Approx(eps).epsilon(1e-12));
      CHECK(drop_prob(Kind::cap, lambda_epsilon(Kind::cap, q, eps, true), q) ==
            doctest::Approx(eps).epsilon(1e-12));
    }
  }
  SUBCASE("domain") {
    CHECK_THROWS_AS(lambda_epsilon(Kind::pap, kQStar, 0.0), std::domain_error);
    CHECK_THROWS_AS(lambda_epsilon(Kind::pap, kQStar, 1.0), std::domain_error);
    CHECK_THROWS_AS(lambda_epsilon(Kind::pap, 0.0, eps), std::domain_error);
    CHECK_THROWS_AS(lambda_epsilon(Kind::pap, 1.0, eps), std::domain_error);
  }
}

TEST_CASE("throughput-optimal interarrival under a drop target") {
  CHECK(lambda_opt(Kind::pap, kN, kAh, 0.05) ==
        doctest::Approx(1.7308908465045338).epsilon(1e-12));
  CHECK(lambda_opt(Kind::cap, kN, kAh, 0.05) ==
        doctest::Approx(3.0753242046304843).epsilon(1e-12));
  CHECK_THROWS_AS(lambda_opt(Kind::pap, 2, 0.1, 0.5), std::domain_error);
}

TEST_CASE("throughput degradation factor") {
  CHECK(degradation(Kind::pap, 0.05, kAh) == doctest::Approx(14.978661367769954).epsilon(1e-12));
  CHECK(degradation(Kind::cap, 0.05, kAh) == doctest::Approx(5.485943501824743).epsilon(1e-12));
  // periodic arrivals pay exponentially less for the same target
  CHECK(degradation(Kind::cap, 0.05, kAh) < degradation(Kind::pap, 0.05, kAh));
  CHECK_THROWS_WITH_AS(degradation(Kind::cap, 0.5, kAh), "degradation: CAP needs epsilon < 1/e",
                       std::domain_error);
}

TEST_CASE("tradeoff curve") {
  const double eps = 0.05;
  SUBCASE("pap frozen point and domain skips") {
    auto pts = tradeoff_curve(Kind::pap, kN, kAh, eps, {2.0, 20.0, 100.0});
    REQUIRE(pts.size() == 3);
    // lambda * epsilon <= 1 puts the formula outside its domain
    CHECK(pts[0].skipped);
    CHECK(pts[1].skipped);  // 20 * 0.05 = 1 exactly
    CHECK_FALSE(pts[2].skipped);
    CHECK(pts[2].lambda == 100.0);
    CHECK(pts[2].t_eff == doctest::Approx(4.7956741946041195).epsilon(1e-12));
  }
  SUBCASE("cap skips lambdas at or below log(1/eps)") {
    auto pts = tradeoff_curve(Kind::cap, kN, kAh, eps, {2.0, 4.0, 50.0});
    REQUIRE(pts.size() == 3);
    CHECK(pts[0].skipped);  // log(20) = 2.996 > 2
    CHECK_FALSE(pts[1].skipped);
    CHECK(pts[1].t_eff > 0.0);
    CHECK_FALSE(pts[2].skipped);
  }
  SUBCASE("domain") {
    CHECK_THROWS_AS(tradeoff_curve(Kind::pap, kN, kAh, 0.0, {10.0}), std::domain_error);
  }
}
