#pragma once

// Independent reference computations used by the tests.

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <numbers>
#include <span>
#include <vector>

#include "svcub/cubature.hpp"
#include "svcub/kernel.hpp"
#include "svcub/moments.hpp"
#include "svcub/path.hpp"

namespace oracle {

// Brute-force nested Gauss-Legendre evaluation of a path iterated integral, split at the
// segment boundaries; exact for polynomial kernels (H - 1/2 a non-negative integer).
class PathIntegral {
 public:
  PathIntegral(const svcub::IteratedIntegralSpec& spec, const svcub::PiecewiseLinearPath& path,
               std::span<const svcub::Kernel> kernels)
      : spec_(spec), path_(path), kernels_(kernels.begin(), kernels.end()), t_(spec.depth() + 1, 0.0) {}

  double value() {
    t_[0] = spec_.end;
    return level(1, spec_.end);
  }

 private:
  double rate(double t, int j) const {
    if (j == 0) return 1.0;
    const int L = path_.segments();
    int l = static_cast<int>(std::floor((t - path_.start()) / path_.horizon() * L));
    l = std::clamp(l, 0, L - 1);
    return path_.rate(l, j - 1);
  }

  double weight() const {
    double w = 1.0;
    for (const auto& f : spec_.factors) w *= kernels_[f.state](t_[f.anchor], t_[f.leg]);
    for (int l = 1; l <= spec_.depth(); ++l) w *= std::pow(t_[l] - spec_.start, spec_.exponent(l));
    return w;
  }

  double level(int l, double upper) {
    if (l > spec_.depth()) return weight();
    std::vector<double> cuts{spec_.start};
    for (int s = 1; s < path_.segments(); ++s) {
      const double c = path_.segment_start(s);
      if (c < upper) cuts.push_back(c);
    }
    cuts.push_back(upper);
    double sum = 0.0;
    for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
      sum += boost::math::quadrature::gauss<double, 12>::integrate(
          [&](double t) {
            t_[l] = t;
            return rate(t, spec_.word[l - 1]) * level(l + 1, t);
          },
          cuts[p], cuts[p + 1]);
    }
    return sum;
  }

  const svcub::IteratedIntegralSpec& spec_;
  const svcub::PiecewiseLinearPath& path_;
  std::vector<svcub::Kernel> kernels_;
  std::vector<double> t_;
};

inline double path_integral(const svcub::IteratedIntegralSpec& spec, const svcub::PiecewiseLinearPath& path,
                            std::span<const svcub::Kernel> kernels) {
  return PathIntegral(spec, path, kernels).value();
}

inline double measure_integral(const svcub::IteratedIntegralSpec& spec, const svcub::CubatureMeasure& m,
                               std::span<const svcub::Kernel> kernels) {
  double sum = 0.0;
  for (std::size_t k = 0; k < m.size(); ++k) sum += m.atom(k).weight * path_integral(spec, m.path(k), kernels);
  return sum;
}

// Variance T^{2H} / 2H of int_0^T (T - s)^{H - 1/2} dB_s.
inline double fbm_variance(double hurst, double horizon) { return std::pow(horizon, 2 * hurst) / (2 * hurst); }

// E[cos(x0 + sqrt(v) Z)].
inline double gaussian_cos(double x0, double v) { return std::cos(x0) * std::exp(-0.5 * v); }

// E[(x0 + sqrt(v) Z - K)^+].
inline double gaussian_call(double x0, double v, double strike) {
  const double s = std::sqrt(v);
  const double d = (x0 - strike) / s;
  const double pdf = std::exp(-0.5 * d * d) / std::sqrt(2 * std::numbers::pi);
  const double cdf = 0.5 * std::erfc(-d / std::numbers::sqrt2);
  return (x0 - strike) * cdf + s * pdf;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// The seven S_4 anchor classes (leg l anchored at anchors[l-1], 0 = interval end).
inline const std::map<int, std::vector<std::vector<int>>>& s4_groups() {
  static const std::map<int, std::vector<std::vector<int>>> g = {
      {1, {{0, 0, 0, 0}}},
      {2, {{0, 0, 0, 1}, {0, 0, 1, 0}, {0, 1, 0, 0}, {0, 0, 0, 2}, {0, 0, 2, 0}, {0, 0, 0, 3}}},
      {3, {{0, 0, 1, 1}, {0, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 2, 2}}},
      {4, {{0, 0, 1, 2}, {0, 0, 2, 1}, {0, 0, 1, 3}, {0, 0, 2, 3}, {0, 1, 0, 2}, {0, 1, 2, 0}, {0, 1, 0, 3}}},
      {5, {{0, 1, 1, 1}}},
      {6, {{0, 1, 1, 2}, {0, 1, 2, 1}, {0, 1, 2, 2}, {0, 1, 1, 3}}},
      {7, {{0, 1, 2, 3}}}};
  return g;
}

// Closed-form group sums of the fourth-order expectations.
inline double s4_closed_form(int alpha, double H, double T) {
  const double s = std::pow(T, 4 * H) / (4 * H);
  const double hp = H + 0.5;
  switch (alpha) {
    case 1: return std::pow(T, 4 * H) / (32 * H * H);
    case 2: return s * std::beta(2 * H, hp);
    case 3:
    case 4: return s * std::beta(2 * H, 2 * hp);
    default: return 0.0;
  }
}

inline svcub::IteratedIntegralSpec anchored_spec(const std::vector<int>& anchors, double T) {
  svcub::IteratedIntegralSpec s;
  s.word.assign(anchors.size(), 1);
  for (std::size_t l = 0; l < anchors.size(); ++l) s.factors.push_back({0, anchors[l], static_cast<int>(l) + 1});
  s.end = T;
  return s;
}

// Expected value of a labelled condition of the two-driver order-5 system (constant kernel on
// state 1, power-law kernel on state 2); empty for labels outside the closed-form table.
inline std::optional<double> two_d_expectation(const std::string& label, double H, double T, double rho) {
  const double hp = H + 0.5;
  const double g1 = std::pow(T, hp + 1) / (hp * (hp + 1));
  const double g2 = std::pow(T, 2 * hp) / (8 * H * hp);
  int i, j, k, i3, k3;
  if (std::sscanf(label.c_str(), "G4b(%d,%d,%d)", &i, &j, &k) == 3) {
    if (i == 1 && j == 1) return T * T / 4;
    if (i != j && k == 1) return rho * g1 / 2;
    if (i == 2 && j == 2 && k == 1) return g2;
    return 0.0;
  }
  if (std::sscanf(label.c_str(), "G4s0(%d)", &i) == 1) return 0.0;
  if (std::sscanf(label.c_str(), "G4s1(%d,%d,%d)", &i, &j, &k) == 3) return 0.0;
  // Pairing t2 = t1 with d<B^i, B^1>: (1/2) int K_i(t1, t1) int_0^t1 K_j(t1, t3) dt3 d<B^i, B^1>_t1,
  // identical for k = 1, 2 because t_k = t1 on the diagonal.
  if (std::sscanf(label.c_str(), "G4s2(%d,%d,%d)", &i, &j, &k) == 3) {
    if (i == 2) return 0.0;
    return j == 1 ? T * T / 4 : g1 / 2;
  }
  if (std::sscanf(label.c_str(), "G4s3(%d,%d,%d,%d,%d)", &i, &j, &i3, &k, &k3) == 5) {
    if (i == 2 || (i3 == 2 && k3 == 3)) return 0.0;
    if (j == 1 && i3 == 1) return T * T / 8;
    if (j == 2 && i3 == 2) return g2 / 2;
    return rho * g1 / 4;
  }
  return std::nullopt;
}

}  // namespace oracle
