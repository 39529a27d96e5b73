#include "svcub/quadrature.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace svcub {

const GaussRule& gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("Gauss-Legendre rule needs n >= 1");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return *it->second;

  auto rule = std::make_unique<GaussRule>();
  if (n == 1) {
    rule->nodes = {0.0};
    rule->weights = {2.0};
  } else {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
      const double b = k / std::sqrt(4.0 * k * k - 1.0);
      J(k, k - 1) = b;
      J(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(J);
    for (int k = 0; k < n; ++k) {
      double x = eig.eigenvalues()(k);
      // One Newton polish on P_n for full double accuracy.
      double p0 = 1.0, p1 = x;
      for (int m = 2; m <= n; ++m) {
        const double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (x * p1 - p0) / (x * x - 1.0);
      x -= p1 / dp;
      p0 = 1.0;
      p1 = x;
      for (int m = 2; m <= n; ++m) {
        const double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      rule->nodes.push_back(x);
      rule->weights.push_back(2.0 / ((1.0 - x * x) * dp * dp));
    }
  }
  auto& ref = *rule;
  cache.emplace(n, std::move(rule));
  return ref;
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double abs_tol) {
  if (b <= a) return 0.0;
  double err = 0.0;
  const double scale = std::max(1.0, std::abs(b - a));
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 30, abs_tol / scale, &err);
}

double integrate_endpoint_singular(const std::function<double(double)>& f, double a, double b,
                                   double rel_tol, int depth) {
  if (b <= a) return 0.0;
  constexpr int kMaxDepth = 8;
  if (depth < 0 || depth >= kMaxDepth) throw std::invalid_argument("quadrature nesting too deep");
  thread_local std::vector<std::unique_ptr<boost::math::quadrature::tanh_sinh<double>>> rules(kMaxDepth);
  if (!rules[depth]) rules[depth] = std::make_unique<boost::math::quadrature::tanh_sinh<double>>(12);
  auto& rule = *rules[depth];
  double err = 0.0, l1 = 0.0;
  auto g = [&f](double x) { return f(x); };
  return rule.integrate(g, a, b, rel_tol, &err, &l1);
}

}  // namespace svcub
