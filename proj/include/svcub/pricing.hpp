#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "svcub/cubature.hpp"
#include "svcub/model.hpp"
#include "svcub/payoff.hpp"
#include "svcub/volterra.hpp"

namespace svcub {

struct PriceResult {
  double value = 0.0;
  std::string method;
  std::size_t atoms = 0;
  int steps = 0;
  int periods = 0;
  int order = 0;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  double std_error = 0.0;
  double seconds = 0.0;
  std::vector<std::string> warnings;
};

// sum_k lambda_k G(X^D_T(omega_k)) over the composed atoms, summed in atom order.
PriceResult cubature_price(const SVIEModel& model, const Payoff& payoff, const ComposedMeasure& measure,
                           const SolveGrid& grid, int threads = 0);

// E[G(x0 + sqrt(T^{2H} / 2H) Z)] by adaptive quadrature on [-12, 12].
PriceResult gaussian_oracle(const Payoff& payoff, double x0, double hurst, double horizon);

struct EulerConfig {
  std::size_t samples = 500;
  std::uint64_t seed = 1;
  std::uint64_t repeat = 0;   // substream index
  bool noise = true;          // false: drift-only solve
  int threads = 0;
};

// Monte-Carlo mean of G(X^D_T) under the Euler scheme; constant-kernel states get the Ito drift.
PriceResult euler_price(const SVIEModel& model, const Payoff& payoff, const SolveGrid& grid, const EulerConfig& cfg);

// Plain and squared payoff sums for one Euler repeat (used for pooling).
struct EulerMoments {
  double mean = 0.0;
  double mean_square = 0.0;
  std::size_t samples = 0;
};
EulerMoments euler_moments(const SVIEModel& model, const Payoff& payoff, const SolveGrid& grid, const EulerConfig& cfg);

enum class TruthSource { analytic, pooled_euler };

struct ComparisonReport {
  double cubature = 0.0;
  double truth = 0.0;
  double truth_std_error = 0.0;  // pooled standard error when the truth is the pooled mean
  double e_cub = 0.0;
  std::vector<double> euler_values;
  std::vector<double> euler_errors;
  double e_mean = 0.0;
  double sd = 0.0;
  double percentile = 0.5;           // Phi((e_cub - e_mean) / sd)
  double empirical_percentile = 0.5; // fraction of Euler errors below e_cub
  bool degenerate = false;
};

struct CompareConfig {
  int repeats = 1000;
  EulerConfig euler;
  TruthSource truth = TruthSource::pooled_euler;
  double analytic_truth = 0.0;
};

ComparisonReport compare(const SVIEModel& model, const Payoff& payoff, double cubature_value, const SolveGrid& grid,
                         const CompareConfig& cfg);

// Standard normal CDF.
double normal_cdf(double z);

}  // namespace svcub
