#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "svcub/kernel.hpp"
#include "svcub/time_integral.hpp"

namespace svcub {

// K_state(t_anchor, t_leg); legs are 1-based and anchor 0 stands for the interval end.
struct KernelFactor {
  int state;
  int anchor;
  int leg;
};

// Integral over start <= t_n <= ... <= t_1 <= end of
// prod K(t_anchor, t_leg) prod (t_l - start)^alpha_l  o dB^{j_n}_{t_n} ... o dB^{j_1}_{t_1}.
struct IteratedIntegralSpec {
  std::vector<int> word;               // j_l in {0..d}, 0 means dt
  std::vector<KernelFactor> factors;
  std::vector<int> exponents;          // alpha_l, empty means all zero
  double start = 0.0;
  double end = 1.0;

  int depth() const { return static_cast<int>(word.size()); }
  // ||j|| = n + #{l : j_l = 0}.
  int weight() const;
  int exponent(int leg) const { return exponents.empty() ? 0 : exponents.at(leg - 1); }
  int stochastic_legs() const;
  // Throws std::domain_error on malformed anchors, legs or exponents.
  void validate(int drivers, int states) const;
  std::string describe() const;
};

struct MomentValue {
  double value = 0.0;
  Method method = Method::analytic;
};

// Euler Beta function B(alpha, beta); domain error for non-positive arguments.
double beta_integral(double alpha, double beta);

// Reduces the Wiener expectation to a deterministic time integral by pairing consecutive
// stochastic legs (coefficient rho/2, legs merged) and keeping dt legs. Returns false when the
// expectation vanishes structurally.
bool reduce_expectation(const IteratedIntegralSpec& spec, std::span<const Kernel> kernels,
                        const Eigen::MatrixXd& corr, TimeIntegral& out);

MomentValue wiener_expectation(const IteratedIntegralSpec& spec, std::span<const Kernel> kernels,
                               const Eigen::MatrixXd& corr,
                               MethodPreference pref = MethodPreference::automatic);

}  // namespace svcub
