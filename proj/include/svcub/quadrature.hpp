#pragma once

#include <functional>
#include <vector>

namespace svcub {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule (Golub-Welsch), cached per n; exact for degree 2n-1.
const GaussRule& gauss_legendre(int n);

// Adaptive Gauss-Kronrod on [a, b] to the given absolute tolerance.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double abs_tol = 1e-12);

// Double-exponential rule for integrands with algebraic endpoint singularities.
// Nested calls must pass distinct depths.
double integrate_endpoint_singular(const std::function<double(double)>& f, double a, double b,
                                   double rel_tol = 1e-11, int depth = 0);

}  // namespace svcub
