#include "svcub/solver.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "svcub/parallel.hpp"

namespace svcub {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct Problem {
  int W = 0, L = 0, d = 0;
  std::vector<SlopePolynomial> polys;  // mirror closure folded into coefficients
  std::vector<double> targets;
  std::vector<double> scale;           // sqrt(beta)
  int unknowns() const { return W + W * L * d; }
  int equations() const { return static_cast<int>(polys.size()) + 1; }
};

Problem compile(const MomentSystem& system, PathLayout layout, const SolverConfig& cfg) {
  Problem p;
  p.W = layout.paths;
  p.L = layout.segments;
  p.d = system.drivers;
  if (p.W < 1 || p.L < 1) throw std::invalid_argument("path layout needs W >= 1 and L >= 1");
  if (!cfg.beta.empty() && cfg.beta.size() != system.conditions.size()) {
    throw std::invalid_argument("beta needs one entry per condition");
  }
  for (std::size_t e = 0; e < system.conditions.size(); ++e) {
    const auto& c = system.conditions[e];
    SlopePolynomial merged;
    merged.segments = p.L;
    merged.drivers = p.d;
    for (const auto& t : c.terms) {
      IteratedIntegralSpec spec = t.spec;
      const SlopePolynomial poly = expand_on_cells(spec, system.kernels, p.L, p.d);
      const double mirror = poly.stochastic_legs % 2 == 0 ? 2.0 : 0.0;
      for (const auto& m : poly.terms) merged.terms.push_back({t.coef * mirror * m.coef, m.vars});
    }
    p.polys.push_back(std::move(merged));
    p.targets.push_back(c.target);
    double beta = cfg.beta.empty() ? (c.target != 0.0 ? 1.0 / (c.target * c.target) : 1.0) : cfg.beta[e];
    if (!(beta > 0.0)) throw std::invalid_argument("beta weights must be positive");
    p.scale.push_back(std::sqrt(beta));
  }
  return p;
}

Eigen::MatrixXd slopes_of(const Problem& p, const Eigen::VectorXd& x, int k) {
  Eigen::MatrixXd a(p.L, p.d);
  const int base = p.W + k * p.L * p.d;
  for (int l = 0; l < p.L; ++l) {
    for (int j = 0; j < p.d; ++j) a(l, j) = x(base + l * p.d + j);
  }
  return a;
}

// Residual vector and (optionally) Jacobian.
void evaluate(const Problem& p, const Eigen::VectorXd& x, Eigen::VectorXd& r, Eigen::MatrixXd* J) {
  const int E = static_cast<int>(p.polys.size());
  r.setZero(E + 1);
  if (J) J->setZero(E + 1, p.unknowns());
  std::vector<Eigen::MatrixXd> a(p.W);
  for (int k = 0; k < p.W; ++k) a[k] = slopes_of(p, x, k);
  const int nv = p.L * p.d;
  Eigen::VectorXd grad(nv);
  for (int e = 0; e < E; ++e) {
    double lhs = 0.0;
    for (int k = 0; k < p.W; ++k) {
      const double v = p.polys[e].eval(a[k]);
      lhs += x(k) * v;
      if (J) {
        (*J)(e, k) = p.scale[e] * v;
        grad.setZero();
        p.polys[e].accumulate_gradient(a[k], p.scale[e] * x(k), grad);
        J->block(e, p.W + k * nv, 1, nv) = grad.transpose();
      }
    }
    r(e) = p.scale[e] * (lhs - p.targets[e]);
  }
  r(E) = 2.0 * x.head(p.W).sum() - 1.0;
  if (J) J->block(E, 0, 1, p.W).setConstant(2.0);
}

double max_relative(const Problem& p, const Eigen::VectorXd& r) {
  double m = 0.0;
  const int E = static_cast<int>(p.polys.size());
  for (int e = 0; e < E; ++e) {
    const double abs_res = std::abs(r(e)) / p.scale[e];
    m = std::max(m, p.targets[e] != 0.0 ? abs_res / std::abs(p.targets[e]) : abs_res);
  }
  return std::max(m, std::abs(r(E)));
}

struct Candidate {
  Eigen::VectorXd x;
  double cost = std::numeric_limits<double>::infinity();
  double max_rel = std::numeric_limits<double>::infinity();
  double max_slope = 0.0;
};

Candidate run_restart(const Problem& p, const SolverConfig& cfg, int restart) {
  std::mt19937_64 rng(splitmix64(cfg.seed ^ splitmix64(static_cast<std::uint64_t>(restart) + 1)));
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd x(p.unknowns());
  for (int k = 0; k < p.W; ++k) x(k) = 0.5 / p.W;
  for (int i = p.W; i < p.unknowns(); ++i) x(i) = normal(rng);

  Eigen::VectorXd r, r_new;
  Eigen::MatrixXd J;
  evaluate(p, x, r, &J);
  double cost = r.squaredNorm();
  double mu = 1e-3;
  const double stop_rel = cfg.threshold * 1e-4;
  for (int it = 0; it < cfg.max_iterations; ++it) {
    if (max_relative(p, r) <= stop_rel) break;
    const Eigen::VectorXd g = J.transpose() * r;
    if (g.lpNorm<Eigen::Infinity>() <= cfg.gradient_tolerance) break;
    const Eigen::MatrixXd A = J.transpose() * J;
    const Eigen::VectorXd diag = A.diagonal().cwiseMax(1e-12);
    bool improved = false;
    while (mu < 1e12) {
      Eigen::MatrixXd M = A;
      M.diagonal() += mu * diag;
      const Eigen::VectorXd step = M.ldlt().solve(-g);
      Eigen::VectorXd x_new = x + step;
      for (int k = 0; k < p.W; ++k) x_new(k) = std::max(0.0, x_new(k));
      evaluate(p, x_new, r_new, nullptr);
      const double c_new = r_new.squaredNorm();
      if (std::isfinite(c_new) && c_new < cost) {
        x = x_new;
        cost = c_new;
        mu = std::max(mu * 0.3, 1e-12);
        improved = true;
        break;
      }
      mu *= 10.0;
    }
    if (!improved) break;
    evaluate(p, x, r, &J);
  }
  Candidate c;
  c.x = x;
  c.cost = cost;
  c.max_rel = max_relative(p, r);
  c.max_slope = x.tail(p.unknowns() - p.W).cwiseAbs().maxCoeff();
  return c;
}

}  // namespace

SolveReport try_solve_moment_system(const MomentSystem& system, PathLayout layout, const SolverConfig& cfg) {
  if (cfg.restarts < 1) throw std::invalid_argument("restart count must be positive");
  const Problem p = compile(system, layout, cfg);
  std::vector<Candidate> candidates(cfg.restarts);
  parallel_for(static_cast<std::size_t>(cfg.restarts), cfg.threads,
               [&](std::size_t i) { candidates[i] = run_restart(p, cfg, static_cast<int>(i)); });

  SolveReport report;
  report.restarts_run = cfg.restarts;
  int best = -1;
  for (int i = 0; i < cfg.restarts; ++i) {
    const auto& c = candidates[i];
    if (c.max_rel <= cfg.threshold) {
      ++report.accepted;
      if (best < 0 || candidates[best].max_rel > cfg.threshold || c.max_slope < candidates[best].max_slope) best = i;
    } else if (best < 0 || (candidates[best].max_rel > cfg.threshold && c.max_rel < candidates[best].max_rel)) {
      best = i;
    }
  }
  report.best_restart = best;
  const Candidate& c = candidates[best];
  std::vector<double> weights;
  std::vector<Eigen::MatrixXd> slopes;
  for (int k = 0; k < p.W; ++k) {
    weights.push_back(c.x(k));
    slopes.push_back(slopes_of(p, c.x, k));
  }
  CubatureMeasure measure = CubatureMeasure::symmetric(system.start, system.horizon, weights, slopes);
  measure.name = system.name;
  MomentSystem with_weights = system;
  with_weights.weight_constraint = true;
  report.rows = verify_measure(with_weights, measure);
  report.max_relative = max_relative_residual(report.rows);
  report.success = report.max_relative <= cfg.threshold;
  report.measure = std::move(measure);
  return report;
}

SolveReport solve_moment_system(const MomentSystem& system, PathLayout layout, const SolverConfig& cfg) {
  SolveReport report = try_solve_moment_system(system, layout, cfg);
  if (!report.success) {
    std::ostringstream os;
    os << "no restart reached max relative residual <= " << cfg.threshold << " for " << system.name
       << " (best " << report.max_relative << " over " << report.restarts_run << " restarts)";
    throw SolverFailure(os.str(), std::move(report));
  }
  return report;
}

}  // namespace svcub
