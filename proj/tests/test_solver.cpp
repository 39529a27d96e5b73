#include <gtest/gtest.h>

#include <cmath>

#include "svcub/moment_systems.hpp"
#include "svcub/solver.hpp"

using namespace svcub;

TEST(Solver, RecoversMultiPeriodN5Family) {
  const double d = 0.1;
  const MomentSystem sys = moment_targets_1d_n5_multi(d);
  SolverConfig cfg;
  cfg.restarts = 16;
  cfg.threshold = 1e-10;
  const SolveReport r = solve_moment_system(sys, {2, 1}, cfg);
  ASSERT_TRUE(r.success);
  EXPECT_LE(r.max_relative, 1e-10);
  const CubatureMeasure& m = *r.measure;
  EXPECT_NEAR(m.weight_sum(), 1.0, 1e-12);
  EXPECT_TRUE(m.is_symmetric());
  // Closed family: lambda1 a1^4 + lambda2 a2^4 = 3/2 and lambda1 a1^2 + lambda2 a2^2 = 1/2 per half.
  double m2 = 0.0, m4 = 0.0;
  for (const auto& a : m.atoms()) {
    m2 += a.weight * std::pow(a.slopes(0, 0), 2);
    m4 += a.weight * std::pow(a.slopes(0, 0), 4);
  }
  EXPECT_NEAR(m2, 1.0, 1e-9);
  EXPECT_NEAR(m4, 3.0, 1e-9);
}

TEST(Solver, OnePeriodN3) {
  const MomentSystem sys = moment_targets_1d_n3_oneperiod(1.5, 1.0);
  SolverConfig cfg;
  cfg.restarts = 16;
  cfg.threshold = 1e-9;
  const SolveReport r = solve_moment_system(sys, {1, 2}, cfg);
  EXPECT_LE(r.max_relative, 1e-9);
}

TEST(Solver, DeterministicForSeed) {
  const MomentSystem sys = moment_targets_1d_n5_multi(0.1);
  SolverConfig cfg;
  cfg.restarts = 8;
  cfg.threads = 3;
  const SolveReport a = try_solve_moment_system(sys, {2, 1}, cfg);
  cfg.threads = 1;
  const SolveReport b = try_solve_moment_system(sys, {2, 1}, cfg);
  EXPECT_EQ(a.best_restart, b.best_restart);
  EXPECT_EQ(a.max_relative, b.max_relative);
  ASSERT_TRUE(a.measure && b.measure);
  ASSERT_EQ(a.measure->size(), b.measure->size());
  for (std::size_t k = 0; k < a.measure->size(); ++k) {
    EXPECT_EQ(a.measure->atom(k).weight, b.measure->atom(k).weight);
    EXPECT_EQ(a.measure->atom(k).slopes, b.measure->atom(k).slopes);
  }
}

TEST(Solver, FailureCarriesBestResiduals) {
  const MomentSystem sys = moment_targets_1d_n5_oneperiod(1.5, 1.0);
  SolverConfig cfg;
  cfg.restarts = 4;
  cfg.max_iterations = 200;
  try {
    solve_moment_system(sys, {1, 1}, cfg);
    FAIL() << "expected SolverFailure";
  } catch (const SolverFailure& e) {
    EXPECT_FALSE(e.report().success);
    EXPECT_EQ(e.report().rows.size(), static_cast<std::size_t>(sys.equation_count()));
    EXPECT_GT(e.report().max_relative, cfg.threshold);
  }
  const SolveReport r = try_solve_moment_system(sys, {1, 1}, cfg);
  EXPECT_FALSE(r.success);
  EXPECT_EQ(r.restarts_run, 4);
}
