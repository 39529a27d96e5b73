#pragma once

#include <string>
#include <vector>

namespace svcub {

// Node ids inside a TimeIntegral besides the variables 0..k-1.
inline constexpr int kEndNode = -1;
inline constexpr int kStartNode = -2;

// (x_hi - x_lo)^exponent, with x_hi >= x_lo on the integration region.
struct PowerFactor {
  int hi;
  int lo;
  double exponent;
};

enum class Method { analytic, quadrature, hybrid };
std::string to_string(Method m);

enum class MethodPreference { automatic, quadrature_only };

// coefficient * integral of prod (x_hi - x_lo)^e over the descending simplex
// end >= v_0 >= v_1 >= ... >= v_{k-1} >= start, or over a cell with per-variable bounds.
struct TimeIntegral {
  int variables = 0;
  double start = 0.0;
  double end = 1.0;
  double coefficient = 1.0;
  std::vector<PowerFactor> factors;
  // Cell bounds; empty means the descending simplex.
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<char> tied;  // tied[b]: v_b <= v_{b-1} replaces upper[b]

  static TimeIntegral simplex(int variables, double start, double end);
  bool is_simplex() const { return lower.empty(); }
};

struct IntegralValue {
  double value = 0.0;
  Method method = Method::analytic;
};

IntegralValue evaluate(const TimeIntegral& integral, MethodPreference pref = MethodPreference::automatic);

}  // namespace svcub
