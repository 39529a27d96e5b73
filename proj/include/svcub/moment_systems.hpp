#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "svcub/kernel.hpp"
#include "svcub/moments.hpp"

namespace svcub {

struct SpecTerm {
  double coef = 1.0;
  IteratedIntegralSpec spec;
};

// sum_k coef_k E^Q[spec_k] = target.
struct MomentCondition {
  std::string label;
  std::vector<SpecTerm> terms;
  double target = 0.0;
};

struct MomentSystem {
  std::string name;
  int drivers = 1;
  std::vector<Kernel> kernels;
  Eigen::MatrixXd corr;
  double start = 0.0;
  double horizon = 1.0;
  std::vector<MomentCondition> conditions;
  bool weight_constraint = false;       // counts "sum of weights = 1" as an equation
  std::map<std::string, double> params;  // construction parameters, for serialization

  int equation_count() const { return static_cast<int>(conditions.size()) + (weight_constraint ? 1 : 0); }
};

// Sums the Wiener expectations of the terms.
double condition_expectation(const MomentCondition& c, const MomentSystem& system);

MomentSystem moment_targets_1d_n3_oneperiod(double hurst, double horizon);
MomentSystem moment_targets_1d_n5_oneperiod(double hurst, double horizon);
// Generic one-period 1-D system for V-driven models with no drift: all-ones words of even
// length n < order, anchor tuples grouped by the coefficient monomial they multiply.
MomentSystem moment_targets_1d_oneperiod(double hurst, double horizon, int order);
MomentSystem moment_targets_1d_n3_multi(double delta, double start = 0.0);
MomentSystem moment_targets_1d_n5_multi(double delta, double start = 0.0);
MomentSystem moment_targets_2d_n3_multi(double delta, double rho, double start = 0.0);
// States: 0 = price (constant kernel, driver 1), 1 = variance (power-law kernel, driver 2).
MomentSystem moment_targets_2d_n5_oneperiod(double hurst, double horizon, double rho, bool homogeneous = true);

// Builds a system by name (1d-n3-oneperiod, 1d-n5-oneperiod, 1d-n3-multi, 1d-n5-multi,
// 2d-n3-multi, 2d-n5-oneperiod) from params H, T, delta, rho, homogeneous.
MomentSystem build_moment_system(const std::string& name, const std::map<std::string, double>& params);

// Group key for an anchor tuple: (#anchors at the end, sorted child counts of legs 1..n).
std::vector<int> anchor_group_key(const std::vector<int>& anchors);

}  // namespace svcub
