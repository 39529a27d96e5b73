#include "svcub/time_integral.hpp"

#include <algorithm>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <stdexcept>

#include "svcub/quadrature.hpp"

namespace svcub {
namespace {

bool is_nonneg_integer(double e) { return e >= 0.0 && std::floor(e) == e; }

double node_value(int node, double start, double end, const std::vector<double>& vals) {
  if (node == kEndNode) return end;
  if (node == kStartNode) return start;
  return vals[node];
}

double power(double base, double e) {
  if (e == 0.0) return 1.0;
  if (e == 1.0) return base;
  if (e == 2.0) return base * base;
  if (base <= 0.0) return 0.0;
  return std::pow(base, e);
}

class NestedQuadrature {
 public:
  explicit NestedQuadrature(const TimeIntegral& ti) : ti_(ti), vals_(ti.variables, 0.0) {
    const int k = ti.variables;
    level_factors_.resize(k);
    polynomial_ = true;
    int total_degree = 0;
    for (const auto& f : ti.factors) {
      const int level = std::max(f.hi, f.lo);
      if (!is_nonneg_integer(f.exponent)) polynomial_ = false;
      total_degree += static_cast<int>(std::ceil(f.exponent));
      if (level < 0) {
        constant_ *= power(node_value(f.hi, ti.start, ti.end, vals_) - node_value(f.lo, ti.start, ti.end, vals_),
                           f.exponent);
      } else {
        level_factors_[level].push_back(f);
      }
    }
    points_.resize(k);
    for (int b = 0; b < k; ++b) {
      const int degree = total_degree + (k - 1 - b);
      points_[b] = degree / 2 + 1;
    }
  }

  double run() {
    if (ti_.variables == 0) return ti_.coefficient * constant_;
    return ti_.coefficient * constant_ * level(0);
  }

 private:
  double lower(int b) const { return ti_.is_simplex() ? ti_.start : ti_.lower[b]; }
  double upper(int b) const {
    if (ti_.is_simplex()) return b == 0 ? ti_.end : vals_[b - 1];
    return ti_.tied[b] ? vals_[b - 1] : ti_.upper[b];
  }

  double integrand(int b, double v) {
    vals_[b] = v;
    double w = 1.0;
    for (const auto& f : level_factors_[b]) {
      w *= power(node_value(f.hi, ti_.start, ti_.end, vals_) - node_value(f.lo, ti_.start, ti_.end, vals_),
                 f.exponent);
      if (w == 0.0) return 0.0;
    }
    if (b + 1 < ti_.variables) w *= level(b + 1);
    return w;
  }

  double level(int b) {
    const double a = lower(b);
    const double c = upper(b);
    if (!(c > a)) return 0.0;
    if (polynomial_) {
      const GaussRule& rule = gauss_legendre(points_[b]);
      const double half = 0.5 * (c - a), mid = 0.5 * (c + a);
      double sum = 0.0;
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        sum += rule.weights[q] * integrand(b, mid + half * rule.nodes[q]);
      }
      return sum * half;
    }
    return graded(b, a, c);
  }

  // Split at the midpoint; on each half map u -> u^p toward the endpoint so algebraic endpoint
  // singularities become smooth enough for fixed Gauss-Legendre.
  double graded(int b, double a, double c) {
    constexpr int kGrade = 6;
    const GaussRule& rule = gauss_legendre(kGraded);
    const double half = 0.5 * (c - a);
    double sum = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double u = 0.5 * (rule.nodes[q] + 1.0);
      const double up = std::pow(u, kGrade);
      const double jac = 0.5 * rule.weights[q] * kGrade * up / u * half;
      sum += jac * (integrand(b, a + half * up) + integrand(b, c - half * up));
    }
    return sum;
  }

  static constexpr int kGraded = 32;

  const TimeIntegral& ti_;
  std::vector<double> vals_;
  std::vector<std::vector<PowerFactor>> level_factors_;
  std::vector<int> points_;
  double constant_ = 1.0;
  bool polynomial_ = true;
};

// Integrates the innermost simplex variables in closed form while they appear only as
// (parent - v)^p (v - start)^q; returns the number of variables left.
int eliminate_nested(TimeIntegral& ti) {
  int k = ti.variables;
  while (k > 0) {
    const int b = k - 1;
    const int parent = b == 0 ? kEndNode : b - 1;
    double p = 0.0, q = 0.0;
    bool ok = true;
    for (const auto& f : ti.factors) {
      if (f.lo == b && f.hi == parent) {
        p += f.exponent;
      } else if (f.hi == b && f.lo == kStartNode) {
        q += f.exponent;
      } else if (f.hi == b || f.lo == b) {
        ok = false;
        break;
      }
    }
    if (!ok) break;
    ti.coefficient *= boost::math::beta(p + 1.0, q + 1.0);
    std::vector<PowerFactor> kept;
    for (const auto& f : ti.factors) {
      if (f.hi != b && f.lo != b) kept.push_back(f);
    }
    kept.push_back({parent, kStartNode, p + q + 1.0});
    ti.factors = std::move(kept);
    k = b;
  }
  ti.variables = k;
  return k;
}

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::analytic: return "analytic";
    case Method::quadrature: return "quadrature";
    case Method::hybrid: return "hybrid";
  }
  return "unknown";
}

TimeIntegral TimeIntegral::simplex(int variables, double start, double end) {
  TimeIntegral ti;
  ti.variables = variables;
  ti.start = start;
  ti.end = end;
  return ti;
}

IntegralValue evaluate(const TimeIntegral& integral, MethodPreference pref) {
  const int k = integral.variables;
  for (const auto& f : integral.factors) {
    auto valid = [k](int node) { return node == kEndNode || node == kStartNode || (node >= 0 && node < k); };
    if (!valid(f.hi) || !valid(f.lo)) throw std::domain_error("time integral factor references an unknown node");
    if (f.exponent < 0.0) throw std::domain_error("time integral factors need non-negative exponents");
  }
  if (!integral.is_simplex()) {
    if (static_cast<int>(integral.lower.size()) != k || static_cast<int>(integral.upper.size()) != k ||
        static_cast<int>(integral.tied.size()) != k) {
      throw std::domain_error("cell bounds must be given for every variable");
    }
    return {NestedQuadrature(integral).run(), Method::quadrature};
  }
  if (pref == MethodPreference::quadrature_only || k == 0) {
    return {NestedQuadrature(integral).run(), k == 0 ? Method::analytic : Method::quadrature};
  }
  TimeIntegral reduced = integral;
  const int left = eliminate_nested(reduced);
  const double value = NestedQuadrature(reduced).run();
  if (left == 0) return {value, Method::analytic};
  return {value, left == k ? Method::quadrature : Method::hybrid};
}

}  // namespace svcub
