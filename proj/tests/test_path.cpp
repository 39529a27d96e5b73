#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "svcub/path.hpp"

using namespace svcub;

namespace {

Eigen::MatrixXd column(std::initializer_list<double> v) {
  Eigen::MatrixXd m(static_cast<int>(v.size()), 1);
  int i = 0;
  for (double x : v) m(i++, 0) = x;
  return m;
}

}  // namespace

TEST(Path, ValuesAndIncrements) {
  const PiecewiseLinearPath p(1.0, 4.0, column({1.0, -2.0}));
  EXPECT_DOUBLE_EQ(p.value(1.0, 0), 0.0);
  EXPECT_DOUBLE_EQ(p.value(3.0, 0), 1.0);
  // Rates are slope / sqrt(4): +1/2 on [1, 3], -1 on [3, 5].
  EXPECT_DOUBLE_EQ(p.value(4.0, 0), 0.0);
  EXPECT_DOUBLE_EQ(p.value(5.0, 0), -1.0);
  EXPECT_DOUBLE_EQ(p.value(9.0, 0), -1.0);
  EXPECT_DOUBLE_EQ(p.increment(0), -1.0);
  EXPECT_DOUBLE_EQ(p.mirrored().value(3.0, 0), -1.0);
}

TEST(Path, ZeroPathKillsStochasticWords) {
  const std::vector<Kernel> k{Kernel::power_law(1.5)};
  const PiecewiseLinearPath p(0.0, 1.0, Eigen::MatrixXd::Zero(3, 1));
  EXPECT_EQ(path_iterated_integral({{1, 0}, {{0, 0, 1}}, {}, 0.0, 1.0}, p, k), 0.0);
  EXPECT_NEAR(path_iterated_integral({{0, 0}, {}, {}, 0.0, 1.0}, p, k), 0.5, 1e-15);
}

TEST(Path, SingleLegKernelIntegral) {
  for (const double H : {1.5, 2.5, 0.9}) {
    const std::vector<Kernel> k{Kernel::power_law(H)};
    const double T = 3.0;
    const PiecewiseLinearPath p(0.0, T, column({1.0}));
    // omega_t = t / sqrt(T): int K(T, t) dt / sqrt(T).
    const double expected = std::pow(T, H + 0.5) / (H + 0.5) / std::sqrt(T);
    EXPECT_LT(oracle::rel_err(path_iterated_integral({{1}, {{0, 0, 1}}, {}, 0.0, T}, p, k), expected), 1e-12);
  }
}

TEST(Path, TwoSegmentSquare) {
  const double H = 1.5, T = 2.0, a1 = 0.7, a2 = -1.3;
  const double hp = H + 0.5;
  const std::vector<Kernel> k{Kernel::power_law(H)};
  const PiecewiseLinearPath p(0.0, T, column({a1, a2}));
  const double q = std::pow(2.0, -hp);
  // Half the square of int K dw, with dw = a / sqrt(T) dt on each half.
  const double expected = std::pow(T, 2 * H) / (2 * hp * hp) * std::pow((1 - q) * a1 + q * a2, 2);
  EXPECT_LT(oracle::rel_err(path_iterated_integral({{1, 1}, {{0, 0, 1}, {0, 0, 2}}, {}, 0.0, T}, p, k), expected), 1e-12);
}

TEST(Path, ExpansionMatchesBruteForce) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n01;
  const std::vector<Kernel> k{Kernel::one(), Kernel::power_law(1.5), Kernel::power_law(2.5)};
  const std::vector<IteratedIntegralSpec> specs = {
      {{1, 2}, {{1, 0, 1}, {2, 1, 2}}, {}, 0.5, 1.7},
      {{2, 0, 1}, {{1, 0, 1}, {2, 1, 3}}, {1, 0, 0}, 0.5, 1.7},
      {{1, 1, 2}, {{2, 0, 1}, {1, 0, 2}, {1, 2, 3}}, {}, 0.5, 1.7},
      {{0, 2, 2}, {{0, 1, 2}, {1, 1, 3}}, {0, 0, 2}, 0.5, 1.7}};
  for (int L : {1, 3}) {
    Eigen::MatrixXd slopes(L, 2);
    for (int i = 0; i < L; ++i) slopes.row(i) << n01(rng), n01(rng);
    const PiecewiseLinearPath p(0.5, 1.2, slopes);
    for (const auto& s : specs) {
      const double brute = oracle::path_integral(s, p, k);
      EXPECT_LT(std::abs(path_iterated_integral(s, p, k) - brute), 1e-12 * std::max(1.0, std::abs(brute)))
          << s.describe() << " L=" << L;
      const SlopePolynomial poly = expand_on_cells(s, k, L, 2);
      EXPECT_LT(std::abs(poly.eval(slopes) - brute), 1e-12 * std::max(1.0, std::abs(brute))) << s.describe();
    }
  }
}

TEST(Path, RoughKernelMatchesBruteForce) {
  const std::vector<Kernel> k{Kernel::power_law(1.2)};
  const PiecewiseLinearPath p(0.0, 1.0, column({0.4, -1.1, 2.0, 0.3}));
  const IteratedIntegralSpec s{{1, 1, 1}, {{0, 0, 1}, {0, 1, 2}, {0, 1, 3}}, {}, 0.0, 1.0};
  EXPECT_NEAR(path_iterated_integral(s, p, k), oracle::path_integral(s, p, k), 1e-7);
}

TEST(Path, RoughKernelNestedClosedForm) {
  // Constant rate r on [0, 1]: r^3 B(2e + 3, e + 1) / (2 (e + 1)^2) with e = H - 1/2.
  for (const double H : {0.55, 0.8, 1.2}) {
    const std::vector<Kernel> k{Kernel::power_law(H)};
    const double T = 1.0, slope = 1.3, e = H - 0.5;
    const PiecewiseLinearPath p(0.0, T, column({slope}));
    const IteratedIntegralSpec s{{1, 1, 1}, {{0, 0, 1}, {0, 1, 2}, {0, 1, 3}}, {}, 0.0, T};
    const double expected = std::pow(slope, 3) * std::beta(2 * e + 3, e + 1) / (2 * (e + 1) * (e + 1));
    EXPECT_LT(oracle::rel_err(path_iterated_integral(s, p, k), expected), 1e-10) << "H=" << H;
  }
}

TEST(Path, PolynomialGradient) {
  const std::vector<Kernel> k{Kernel::power_law(1.5)};
  const IteratedIntegralSpec s{{1, 1, 1, 1}, {{0, 0, 1}, {0, 1, 2}, {0, 0, 3}, {0, 2, 4}}, {}, 0.0, 1.0};
  const SlopePolynomial poly = expand_on_cells(s, k, 3, 1);
  Eigen::MatrixXd a = column({0.3, -0.8, 1.4});
  Eigen::VectorXd g = Eigen::VectorXd::Zero(3);
  poly.accumulate_gradient(a, 1.0, g);
  for (int i = 0; i < 3; ++i) {
    Eigen::MatrixXd up = a, dn = a;
    up(i, 0) += 1e-6;
    dn(i, 0) -= 1e-6;
    EXPECT_NEAR(g(i), (poly.eval(up) - poly.eval(dn)) / 2e-6, 1e-7);
  }
}

TEST(Path, IntervalMismatchRejected) {
  const std::vector<Kernel> k{Kernel::one()};
  const PiecewiseLinearPath p(0.0, 1.0, column({1.0}));
  EXPECT_THROW(path_iterated_integral({{1}, {}, {}, 0.0, 2.0}, p, k), std::domain_error);
}
