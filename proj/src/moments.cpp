#include "svcub/moments.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace svcub {

int IteratedIntegralSpec::weight() const {
  int w = depth();
  for (int j : word) w += (j == 0);
  return w;
}

int IteratedIntegralSpec::stochastic_legs() const {
  int m = 0;
  for (int j : word) m += (j != 0);
  return m;
}

void IteratedIntegralSpec::validate(int drivers, int states) const {
  const int n = depth();
  if (!(end > start)) throw std::domain_error("spec interval must satisfy start < end");
  for (int j : word) {
    if (j < 0 || j > drivers) throw std::domain_error("word letter out of range in " + describe());
  }
  if (!exponents.empty() && static_cast<int>(exponents.size()) != n) {
    throw std::domain_error("exponent list must have one entry per leg in " + describe());
  }
  for (int a : exponents) {
    if (a < 0) throw std::domain_error("monomial exponents must be non-negative in " + describe());
  }
  for (const auto& f : factors) {
    if (f.leg < 1 || f.leg > n) throw std::domain_error("kernel factor leg out of range in " + describe());
    if (f.anchor < 0 || f.anchor >= f.leg) {
      throw std::domain_error("kernel factor anchor must satisfy 0 <= anchor < leg in " + describe());
    }
    if (f.state < 0 || f.state >= states) throw std::domain_error("kernel factor state out of range in " + describe());
  }
}

std::string IteratedIntegralSpec::describe() const {
  std::ostringstream os;
  os << "j=(";
  for (std::size_t l = 0; l < word.size(); ++l) os << (l ? "," : "") << word[l];
  os << ")";
  for (const auto& f : factors) os << " K" << f.state << "(t" << f.anchor << ",t" << f.leg << ")";
  for (std::size_t l = 0; l < exponents.size(); ++l) {
    if (exponents[l]) os << " (t" << l + 1 << "-s)^" << exponents[l];
  }
  os << " on [" << start << "," << end << "]";
  return os.str();
}

double beta_integral(double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0)) {
    throw std::domain_error("beta_integral requires positive arguments");
  }
  return boost::math::beta(alpha, beta);
}

bool reduce_expectation(const IteratedIntegralSpec& spec, std::span<const Kernel> kernels,
                        const Eigen::MatrixXd& corr, TimeIntegral& out) {
  spec.validate(static_cast<int>(corr.rows()), static_cast<int>(kernels.size()));
  const int n = spec.depth();
  std::vector<int> var_of(n + 1, kEndNode);
  double coef = 1.0;
  int vars = 0;
  int l = 1;
  while (l <= n) {
    const int j = spec.word[l - 1];
    if (j == 0) {
      var_of[l] = vars++;
      l += 1;
    } else if (l < n && spec.word[l] != 0) {
      coef *= 0.5 * corr(j - 1, spec.word[l] - 1);
      var_of[l] = var_of[l + 1] = vars++;
      l += 2;
    } else {
      return false;
    }
  }
  if (coef == 0.0) return false;
  out = TimeIntegral::simplex(vars, spec.start, spec.end);
  out.coefficient = coef;
  for (const auto& f : spec.factors) {
    const Kernel& k = kernels[f.state];
    const int hi = f.anchor == 0 ? kEndNode : var_of[f.anchor];
    const int lo = var_of[f.leg];
    if (hi == lo) {
      if (k.diagonal() == 0.0) return false;
      continue;
    }
    if (!k.is_constant()) out.factors.push_back({hi, lo, k.exponent()});
  }
  for (int leg = 1; leg <= n; ++leg) {
    const int a = spec.exponent(leg);
    if (a > 0) out.factors.push_back({var_of[leg], kStartNode, static_cast<double>(a)});
  }
  return true;
}

MomentValue wiener_expectation(const IteratedIntegralSpec& spec, std::span<const Kernel> kernels,
                               const Eigen::MatrixXd& corr, MethodPreference pref) {
  TimeIntegral ti;
  if (!reduce_expectation(spec, kernels, corr, ti)) return {0.0, Method::analytic};
  const IntegralValue v = evaluate(ti, pref);
  return {v.value, v.method};
}

}  // namespace svcub
