#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "svcub/cubature.hpp"
#include "svcub/pricing.hpp"

using namespace svcub;

TEST(Oracle, GaussianFunctionals) {
  for (const double H : {1.5, 2.5}) {
    for (const double T : {0.3, 1.0, 3.0}) {
      const double v = oracle::fbm_variance(H, T);
      EXPECT_NEAR(gaussian_oracle(payoff_cos(), 1.0, H, T).value, oracle::gaussian_cos(1.0, v), 1e-10);
      EXPECT_NEAR(gaussian_oracle(payoff_square(), 1.0, H, T).value, 1.0 + v, 1e-9 * (1 + v));
      EXPECT_NEAR(gaussian_oracle(payoff_call(0.5), 0.56, H, T).value, oracle::gaussian_call(0.56, v, 0.5), 1e-10);
    }
  }
}

TEST(Cubature, ExactnessOfOrderThreeMeasures) {
  const double H = 1.5, T = 1.0;
  const SVIEModel m = linear_model(H, 0.0);
  const SolveGrid grid{1000, T};
  const double one = cubature_price(m, payoff_square(), ComposedMeasure({build_1d_oneperiod_n3(H, T)}), grid).value;
  const double mul = cubature_price(m, payoff_square(), compose_uniform(build_1d_multi_n3(T), 1, T), grid).value;
  const double hp = H + 0.5, hm = H - 0.5;
  EXPECT_NEAR(one, std::pow(T, 2 * H) / (2 * H), 1e-6);
  EXPECT_NEAR(mul, std::pow(T, 2 * H) / (hp * hp), 1e-6);
  EXPECT_NEAR(one - mul, hm * hm / (2 * H * hp * hp) * std::pow(T, 2 * H), 1e-6);
}

TEST(Cubature, ThreadCountDoesNotChangeResult) {
  const SVIEModel m = cos_model(1.5, 1.0);
  const ComposedMeasure c = compose_uniform(build_1d_multi_n3(0.25), 4, 1.0);
  const double a = cubature_price(m, payoff_cos(), c, SolveGrid{40, 1.0}, 1).value;
  const double b = cubature_price(m, payoff_cos(), c, SolveGrid{40, 1.0}, 5).value;
  EXPECT_EQ(a, b);
}

TEST(Cubature, SmoothnessWarningForCalls) {
  const PriceResult r = cubature_price(linear_model(2.5, 0.56), payoff_call(0.5),
                                       ComposedMeasure({build_1d_oneperiod_n3(2.5, 1.0)}), SolveGrid{20, 1.0});
  EXPECT_FALSE(r.warnings.empty());
  EXPECT_EQ(r.atoms, 2u);
}

TEST(Cubature, RejectsHorizonMismatch) {
  EXPECT_THROW(cubature_price(linear_model(1.5, 0.0), payoff_cos(), ComposedMeasure({build_1d_multi_n3(0.5)}),
                              SolveGrid{10, 1.0}),
               std::invalid_argument);
}

// The Euler scheme of the linear model is exactly Gaussian with the Riemann-sum variance.
TEST(Euler, LinearModelMatchesDiscreteGaussian) {
  const double H = 1.5, T = 1.0;
  const int D = 20;
  const double h = T / D;
  double v = 0.0;
  for (int a = 0; a < D; ++a) v += h * std::pow(T - a * h, 2 * H - 1);
  EulerConfig cfg;
  cfg.samples = 200000;
  cfg.seed = 11;
  const PriceResult r = euler_price(linear_model(H, 1.0), payoff_cos(), SolveGrid{D, T}, cfg);
  EXPECT_NEAR(r.value, oracle::gaussian_cos(1.0, v), 4 * r.std_error);
  EXPECT_GT(r.std_error, 0.0);
}

TEST(Euler, ReproducibleAcrossThreads) {
  EulerConfig cfg;
  cfg.samples = 5000;
  cfg.seed = 3;
  cfg.threads = 1;
  const double a = euler_price(cos_model(1.5, 1.0), payoff_cos(), SolveGrid{30, 1.0}, cfg).value;
  cfg.threads = 6;
  const double b = euler_price(cos_model(1.5, 1.0), payoff_cos(), SolveGrid{30, 1.0}, cfg).value;
  EXPECT_EQ(a, b);
  cfg.repeat = 1;
  EXPECT_NE(euler_price(cos_model(1.5, 1.0), payoff_cos(), SolveGrid{30, 1.0}, cfg).value, a);
}

TEST(Euler, DriftOnlyOverride) {
  EulerConfig cfg;
  cfg.samples = 1;
  cfg.noise = false;
  EXPECT_DOUBLE_EQ(euler_price(linear_model(1.5, 0.3), payoff_identity(), SolveGrid{10, 1.0}, cfg).value, 0.3);
}

TEST(Euler, HestonItoDriftPositive) {
  // S = exp(int sigma dB) under Stratonovich dynamics: E[S] > S0 for cos(U) volatility with U ~ 1.
  HestonSpec s;
  s.b1 = "zero";
  EulerConfig cfg;
  cfg.samples = 20000;
  cfg.seed = 5;
  const PriceResult r = euler_price(heston_model(s), payoff_identity(), SolveGrid{20, 0.5}, cfg);
  EXPECT_GT(r.value, 1.0 + 3 * r.std_error);
}

TEST(Compare, NormalCdf) {
  EXPECT_DOUBLE_EQ(normal_cdf(0.0), 0.5);
  EXPECT_NEAR(normal_cdf(1.959963984540054), 0.975, 1e-12);
  EXPECT_NEAR(normal_cdf(-1.0), 0.15865525393145707, 1e-14);
}

TEST(Compare, DegenerateSpread) {
  CompareConfig cfg;
  cfg.repeats = 5;
  cfg.euler.samples = 3;
  cfg.euler.noise = false;
  cfg.truth = TruthSource::analytic;
  cfg.analytic_truth = 0.5;
  const ComparisonReport r = compare(linear_model(1.5, 0.3), payoff_identity(), 0.45, SolveGrid{5, 1.0}, cfg);
  EXPECT_TRUE(r.degenerate);
  EXPECT_DOUBLE_EQ(r.sd, 0.0);
  EXPECT_NEAR(r.e_cub, 0.05, 1e-15);
  EXPECT_NEAR(r.e_mean, 0.2, 1e-15);
  EXPECT_EQ(r.percentile, 0.0);
}

TEST(Compare, PooledTruthAndRanks) {
  CompareConfig cfg;
  cfg.repeats = 200;
  cfg.euler.samples = 50;
  cfg.euler.seed = 9;
  const ComparisonReport r = compare(linear_model(1.5, 1.0), payoff_cos(), 0.5, SolveGrid{10, 0.5}, cfg);
  ASSERT_EQ(r.euler_errors.size(), 200u);
  double mean = 0.0;
  for (double y : r.euler_values) mean += y / 200;
  EXPECT_NEAR(r.truth, mean, 1e-12);
  EXPECT_GT(r.truth_std_error, 0.0);
  EXPECT_GE(r.empirical_percentile, 0.0);
  EXPECT_LE(r.empirical_percentile, 1.0);
  EXPECT_NEAR(r.percentile, normal_cdf((r.e_cub - r.e_mean) / r.sd), 1e-15);
}
