#include "svcub/path.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace svcub {

PiecewiseLinearPath::PiecewiseLinearPath(double start, double horizon, Eigen::MatrixXd slopes)
    : start_(start), horizon_(horizon), slopes_(std::move(slopes)) {
  if (!(horizon_ > 0.0)) throw std::invalid_argument("path horizon must be positive");
  if (slopes_.rows() < 1 || slopes_.cols() < 1) throw std::invalid_argument("path needs at least one segment and driver");
}

double PiecewiseLinearPath::value(double t, int j) const {
  const int L = segments();
  const double seg = horizon_ / L;
  const double u = std::clamp(t - start_, 0.0, horizon_);
  double v = 0.0;
  for (int l = 0; l < L; ++l) {
    const double a = l * seg;
    if (u <= a) break;
    v += rate(l, j) * (std::min(u, a + seg) - a);
  }
  return v;
}

double PiecewiseLinearPath::increment(int j) const {
  return slopes_.col(j).sum() * std::sqrt(horizon_) / segments();
}

double SlopePolynomial::eval(const Eigen::MatrixXd& slopes) const {
  double sum = 0.0;
  const double* a = slopes.data();
  const int L = segments;
  for (const auto& t : terms) {
    double p = t.coef;
    for (int v : t.vars) p *= a[(v % drivers) * L + v / drivers];
    sum += p;
  }
  return sum;
}

void SlopePolynomial::accumulate_gradient(const Eigen::MatrixXd& slopes, double scale,
                                          Eigen::Ref<Eigen::VectorXd> grad) const {
  const double* a = slopes.data();
  const int L = segments;
  auto at = [&](int v) { return a[(v % drivers) * L + v / drivers]; };
  for (const auto& t : terms) {
    const std::size_t m = t.vars.size();
    for (std::size_t q = 0; q < m; ++q) {
      double p = scale * t.coef;
      for (std::size_t r = 0; r < m; ++r) {
        if (r != q) p *= at(t.vars[r]);
      }
      grad(t.vars[q]) += p;
    }
  }
}

namespace {

TimeIntegral cell_integral(const IteratedIntegralSpec& spec, std::span<const Kernel> kernels, int segments,
                           std::span<const int> cells, bool& vanishes) {
  const int n = spec.depth();
  TimeIntegral ti;
  ti.variables = n;
  ti.start = spec.start;
  ti.end = spec.end;
  ti.lower.resize(n);
  ti.upper.resize(n);
  ti.tied.resize(n);
  const double seg = (spec.end - spec.start) / segments;
  vanishes = false;
  for (int b = 0; b < n; ++b) {
    ti.lower[b] = spec.start + seg * cells[b];
    ti.upper[b] = cells[b] + 1 == segments ? spec.end : spec.start + seg * (cells[b] + 1);
    ti.tied[b] = b > 0 && cells[b] == cells[b - 1];
  }
  for (const auto& f : spec.factors) {
    const Kernel& k = kernels[f.state];
    if (k.is_constant()) continue;
    ti.factors.push_back({f.anchor == 0 ? kEndNode : f.anchor - 1, f.leg - 1, k.exponent()});
  }
  for (int leg = 1; leg <= n; ++leg) {
    const int a = spec.exponent(leg);
    if (a > 0) ti.factors.push_back({leg - 1, kStartNode, static_cast<double>(a)});
  }
  return ti;
}

}  // namespace

double cell_coefficient(const IteratedIntegralSpec& spec, std::span<const Kernel> kernels, int segments,
                        std::span<const int> cells) {
  if (static_cast<int>(cells.size()) != spec.depth()) throw std::domain_error("one cell index per leg required");
  for (std::size_t b = 0; b < cells.size(); ++b) {
    if (cells[b] < 0 || cells[b] >= segments || (b > 0 && cells[b] > cells[b - 1])) {
      throw std::domain_error("cells must be non-increasing segment indices");
    }
  }
  bool vanishes = false;
  TimeIntegral ti = cell_integral(spec, kernels, segments, cells, vanishes);
  return evaluate(ti).value;
}

SlopePolynomial expand_on_cells(const IteratedIntegralSpec& spec, std::span<const Kernel> kernels, int segments,
                                int drivers) {
  spec.validate(drivers, static_cast<int>(kernels.size()));
  if (segments < 1) throw std::domain_error("segment count must be positive");
  const int n = spec.depth();
  SlopePolynomial poly;
  poly.segments = segments;
  poly.drivers = drivers;
  poly.stochastic_legs = spec.stochastic_legs();
  const double scale = std::pow(spec.end - spec.start, -0.5 * poly.stochastic_legs);

  std::map<std::vector<int>, double> acc;
  std::vector<int> cells(n, segments - 1);
  while (true) {
    double c = cell_coefficient(spec, kernels, segments, cells);
    if (c != 0.0) {
      std::vector<int> vars;
      for (int b = 0; b < n; ++b) {
        if (spec.word[b] != 0) vars.push_back(cells[b] * drivers + spec.word[b] - 1);
      }
      std::sort(vars.begin(), vars.end());
      acc[vars] += c * scale;
    }
    // Next non-increasing sequence (lexicographically decreasing).
    int b = n - 1;
    while (b >= 0 && cells[b] == 0) --b;
    if (b < 0) break;
    --cells[b];
    for (int r = b + 1; r < n; ++r) cells[r] = cells[b];
  }
  for (auto& [vars, coef] : acc) poly.terms.push_back({coef, vars});
  return poly;
}

double path_iterated_integral(const IteratedIntegralSpec& spec, const PiecewiseLinearPath& path,
                              std::span<const Kernel> kernels) {
  if (std::abs(spec.start - path.start()) > 1e-12 * std::max(1.0, std::abs(path.start())) ||
      std::abs(spec.end - path.end()) > 1e-12 * std::max(1.0, std::abs(path.end()))) {
    throw std::domain_error("spec interval does not match the path interval");
  }
  if (spec.depth() == 0) return 1.0;
  return expand_on_cells(spec, kernels, path.segments(), path.drivers()).eval(path.slopes());
}

}  // namespace svcub
