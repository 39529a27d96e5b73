#include "svcub/cubature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace svcub {
namespace {

double neumaier_sum(const std::vector<double>& xs) {
  double sum = 0.0, comp = 0.0;
  for (double x : xs) {
    const double t = sum + x;
    comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  return sum + comp;
}

}  // namespace

CubatureMeasure::CubatureMeasure(double start, double horizon, std::vector<Atom> atoms)
    : start_(start), horizon_(horizon), atoms_(std::move(atoms)) {
  if (!(horizon_ > 0.0)) throw std::invalid_argument("measure horizon must be positive");
  if (atoms_.empty()) throw std::invalid_argument("measure needs at least one atom");
  const auto rows = atoms_.front().slopes.rows(), cols = atoms_.front().slopes.cols();
  if (rows < 1 || cols < 1) throw std::invalid_argument("atom slopes must be non-empty");
  for (const auto& a : atoms_) {
    if (a.slopes.rows() != rows || a.slopes.cols() != cols) {
      throw std::invalid_argument("all atoms need the same segment and driver counts");
    }
    if (!(a.weight >= 0.0) || !std::isfinite(a.weight)) throw std::invalid_argument("atom weights must be non-negative");
    if (!a.slopes.allFinite()) throw std::invalid_argument("atom slopes must be finite");
  }
}

CubatureMeasure CubatureMeasure::symmetric(double start, double horizon, const std::vector<double>& half_weights,
                                           const std::vector<Eigen::MatrixXd>& half_slopes) {
  if (half_weights.size() != half_slopes.size()) {
    throw std::domain_error("weights do not match the path count");
  }
  std::vector<Atom> atoms;
  for (std::size_t k = 0; k < half_weights.size(); ++k) {
    if (half_slopes[k].isZero(0.0)) {
      atoms.push_back({2.0 * half_weights[k], half_slopes[k]});
    } else {
      atoms.push_back({half_weights[k], half_slopes[k]});
      atoms.push_back({half_weights[k], -half_slopes[k]});
    }
  }
  return CubatureMeasure(start, horizon, std::move(atoms));
}

double CubatureMeasure::weight_sum() const {
  std::vector<double> w;
  for (const auto& a : atoms_) w.push_back(a.weight);
  return neumaier_sum(w);
}

double CubatureMeasure::max_abs_slope() const {
  double m = 0.0;
  for (const auto& a : atoms_) m = std::max(m, a.slopes.cwiseAbs().maxCoeff());
  return m;
}

bool CubatureMeasure::is_symmetric(double tol) const {
  for (const auto& a : atoms_) {
    bool found = false;
    for (const auto& b : atoms_) {
      if (std::abs(a.weight - b.weight) <= tol && (a.slopes + b.slopes).cwiseAbs().maxCoeff() <= tol) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

CubatureMeasure CubatureMeasure::moved(double start, double horizon) const {
  CubatureMeasure m(start, horizon, atoms_);
  m.name = name;
  return m;
}

double measure_expectation(const IteratedIntegralSpec& spec, const CubatureMeasure& measure,
                           std::span<const Kernel> kernels) {
  if (std::abs(spec.start - measure.start()) > 1e-12 * std::max(1.0, std::abs(measure.start())) ||
      std::abs(spec.end - measure.end()) > 1e-12 * std::max(1.0, std::abs(measure.end()))) {
    throw std::domain_error("spec interval does not match the measure interval");
  }
  if (spec.depth() == 0) return measure.weight_sum();
  const SlopePolynomial poly = expand_on_cells(spec, kernels, measure.segments(), measure.drivers());
  std::vector<double> terms;
  for (const auto& a : measure.atoms()) terms.push_back(a.weight * poly.eval(a.slopes));
  return neumaier_sum(terms);
}

CompositePath::CompositePath(std::vector<PiecewiseLinearPath> pieces) : pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw std::invalid_argument("composite path needs at least one piece");
}

double CompositePath::value(double t, int j) const {
  double v = 0.0;
  for (const auto& p : pieces_) {
    if (t >= p.end()) {
      v += p.increment(j);
    } else {
      if (t > p.start()) v += p.value(t, j);
      break;
    }
  }
  return v;
}

ComposedMeasure::ComposedMeasure(std::vector<CubatureMeasure> periods) : periods_(std::move(periods)) {
  if (periods_.empty()) throw std::invalid_argument("composition needs at least one period");
  for (std::size_t m = 1; m < periods_.size(); ++m) {
    const double gap = periods_[m].start() - periods_[m - 1].end();
    if (std::abs(gap) > 1e-12 * std::max(1.0, std::abs(periods_[m].start()))) {
      throw std::invalid_argument("composed periods must be contiguous");
    }
    if (periods_[m].drivers() != periods_[0].drivers()) {
      throw std::invalid_argument("composed periods must share the driver count");
    }
  }
  for (const auto& p : periods_) count_ *= p.size();
}

std::vector<int> ComposedMeasure::digits(std::size_t index) const {
  std::vector<int> d(periods_.size());
  for (int m = static_cast<int>(periods_.size()) - 1; m >= 0; --m) {
    d[m] = static_cast<int>(index % periods_[m].size());
    index /= periods_[m].size();
  }
  return d;
}

double ComposedMeasure::weight(std::size_t index) const {
  const auto d = digits(index);
  double w = 1.0;
  for (std::size_t m = 0; m < d.size(); ++m) w *= periods_[m].atom(d[m]).weight;
  return w;
}

CompositePath ComposedMeasure::path(std::size_t index) const {
  const auto d = digits(index);
  std::vector<PiecewiseLinearPath> pieces;
  pieces.reserve(d.size());
  for (std::size_t m = 0; m < d.size(); ++m) pieces.push_back(periods_[m].path(d[m]));
  return CompositePath(std::move(pieces));
}

double ComposedMeasure::weight_sum() const {
  std::vector<double> w(count_);
  for (std::size_t i = 0; i < count_; ++i) w[i] = weight(i);
  return neumaier_sum(w);
}

ComposedMeasure compose(std::vector<CubatureMeasure> periods) { return ComposedMeasure(std::move(periods)); }

ComposedMeasure compose_uniform(const CubatureMeasure& unit, int periods, double horizon, double start) {
  if (periods < 1) throw std::invalid_argument("period count must be at least 1");
  const double delta = horizon / periods;
  std::vector<CubatureMeasure> list;
  for (int m = 0; m < periods; ++m) list.push_back(unit.moved(start + m * delta, delta));
  return ComposedMeasure(std::move(list));
}

CubatureMeasure build_1d_multi_n3(double delta, double start) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  CubatureMeasure m = CubatureMeasure::symmetric(start, delta, {0.5}, {Eigen::MatrixXd::Constant(1, 1, 1.0)});
  m.name = "1d-n3-multi";
  return m;
}

CubatureMeasure build_1d_multi_n5(double delta, double lambda1, double start) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  if (!(lambda1 > 0.0)) throw std::domain_error("lambda1 must be positive");
  if (lambda1 > 1.0 / 6.0 + 1e-15) throw std::domain_error("requires lambda1 <= 1/6");
  const double lambda2 = 0.5 - lambda1;
  const double a1 = std::sqrt(1.0 + std::sqrt(2.0 * lambda2 / lambda1));
  const double a2 = std::sqrt(std::max(0.0, 1.0 - std::sqrt(2.0 * lambda1 / lambda2)));
  const bool default_family = std::abs(lambda1 - 1.0 / 6.0) <= 1e-15;
  std::vector<Atom> atoms;
  if (default_family) {
    atoms = {{1.0 / 6.0, Eigen::MatrixXd::Constant(1, 1, std::sqrt(3.0))},
             {2.0 / 3.0, Eigen::MatrixXd::Zero(1, 1)},
             {1.0 / 6.0, Eigen::MatrixXd::Constant(1, 1, -std::sqrt(3.0))}};
  } else {
    atoms = {{lambda1, Eigen::MatrixXd::Constant(1, 1, a1)},
             {lambda2, Eigen::MatrixXd::Constant(1, 1, a2)},
             {lambda2, Eigen::MatrixXd::Constant(1, 1, -a2)},
             {lambda1, Eigen::MatrixXd::Constant(1, 1, -a1)}};
  }
  CubatureMeasure m(start, delta, std::move(atoms));
  m.name = "1d-n5-multi";
  return m;
}

OnePeriodN3Constants oneperiod_n3_constants(double hurst, double horizon) {
  const Kernel k = Kernel::power_law(hurst);
  const std::vector<Kernel> kernels{k};
  const IteratedIntegralSpec spec{{1, 1}, {{0, 0, 1}, {0, 1, 2}}, {}, 0.0, horizon};
  OnePeriodN3Constants c{};
  const std::vector<int> first{0, 0}, mixed{1, 0}, second{1, 1};
  c.c1 = cell_coefficient(spec, kernels, 2, first);
  c.c2 = cell_coefficient(spec, kernels, 2, mixed);
  c.c3 = cell_coefficient(spec, kernels, 2, second);
  const double disc = c.c2 * c.c2 - 4.0 * c.c1 * c.c3;
  if (disc < 0.0) throw std::runtime_error("one-period N=3 construction failed: c2^2 < 4 c1 c3");
  c.c4 = (-c.c2 + std::sqrt(disc)) / (2.0 * c.c3);
  const double hp = hurst + 0.5;
  const double p = std::pow(2.0, hp);
  c.a1 = hp * p / (std::sqrt(2.0 * hurst) * (p + c.c4 - 1.0));
  c.a2 = c.c4 * c.a1;
  return c;
}

CubatureMeasure build_1d_oneperiod_n3(double hurst, double horizon) {
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  const auto c = oneperiod_n3_constants(hurst, horizon);
  Eigen::MatrixXd a(2, 1);
  a << c.a1, c.a2;
  CubatureMeasure m = CubatureMeasure::symmetric(0.0, horizon, {0.5}, {a});
  m.name = "1d-n3-oneperiod";
  return m;
}

CubatureMeasure build_2d_multi_n3(double delta, double rho, std::optional<double> theta1, double start) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  if (std::abs(rho) > 1.0) throw std::domain_error("|rho| must not exceed 1");
  const double gap = std::acos(rho);
  const double t1 = theta1.value_or(0.5 * gap);
  const double t2 = t1 - gap;
  const double r2 = std::numbers::sqrt2;
  Eigen::MatrixXd p1(1, 2), p2(1, 2);
  p1 << r2 * std::sin(t1), r2 * std::sin(t2);
  p2 << r2 * std::cos(t1), r2 * std::cos(t2);
  CubatureMeasure m = CubatureMeasure::symmetric(start, delta, {0.25, 0.25}, {p1, p2});
  m.name = "2d-n3-multi";
  return m;
}

CubatureMeasure table4_measure(double horizon) {
  Eigen::MatrixXd a1(4, 1), a2(4, 1);
  a1 << -3.04533315, 0.71729258, -0.60085202, 0.12029985;
  a2 << 1.57981296, -2.08974376, 2.33258457, -4.5060389;
  CubatureMeasure m = CubatureMeasure::symmetric(0.0, horizon, {0.15332891, 0.34667109}, {a1, a2});
  m.name = "1d-n5-oneperiod-printed";
  return m;
}

std::vector<ResidualRow> verify_measure(const MomentSystem& system, const CubatureMeasure& measure) {
  std::vector<ResidualRow> rows;
  for (const auto& c : system.conditions) {
    double lhs = 0.0;
    for (const auto& t : c.terms) lhs += t.coef * measure_expectation(t.spec, measure, system.kernels);
    ResidualRow r{c.label, lhs, c.target, lhs - c.target, 0.0};
    r.relative = c.target != 0.0 ? std::abs(r.residual / c.target) : std::abs(r.residual);
    rows.push_back(r);
  }
  if (system.weight_constraint) {
    const double w = measure.weight_sum();
    rows.push_back({"weights", w, 1.0, w - 1.0, std::abs(w - 1.0)});
  }
  return rows;
}

double max_relative_residual(const std::vector<ResidualRow>& rows) {
  double m = 0.0;
  for (const auto& r : rows) m = std::max(m, r.relative);
  return m;
}

}  // namespace svcub
