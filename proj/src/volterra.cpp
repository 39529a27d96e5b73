#include "svcub/volterra.hpp"

#include <cmath>
#include <sstream>

namespace svcub {

void SolveGrid::validate() const {
  if (steps < 1) throw std::invalid_argument("grid needs at least one step");
  if (!(horizon > 0.0)) throw std::invalid_argument("grid horizon must be positive");
}

VolterraSolver::VolterraSolver(const SVIEModel& model, SolveGrid grid) : model_(model), grid_(grid) {
  grid_.validate();
  const double h = grid_.step();
  for (int i = 0; i < model_.states(); ++i) {
    std::vector<double> w(grid_.steps + 1);
    for (int m = 0; m <= grid_.steps; ++m) w[m] = model_.kernel(i).at_lag(m * h);
    lag_weights_.push_back(std::move(w));
    std::vector<int> act;
    for (int j = 0; j <= model_.drivers(); ++j) {
      if (!model_.coefficient_is_zero(i, j)) act.push_back(j);
    }
    active_.push_back(std::move(act));
  }
}

double VolterraSolver::ito_drift(int i, std::vector<double>& x) const {
  const auto& corr = model_.correlation();
  const int d = model_.drivers();
  double sum = 0.0;
  for (int k : model_.semimartingale_states()) {
    const double xk = x[k];
    const double eps = 1e-6 * std::max(1.0, std::abs(xk));
    std::vector<double> dV(d + 1, 0.0);
    x[k] = xk + eps;
    for (int j = 1; j <= d; ++j) dV[j] = model_.coefficient(i, j, x);
    x[k] = xk - eps;
    for (int j = 1; j <= d; ++j) dV[j] = (dV[j] - model_.coefficient(i, j, x)) / (2.0 * eps);
    x[k] = xk;
    for (int j = 1; j <= d; ++j) {
      if (dV[j] == 0.0) continue;
      for (int jp = 1; jp <= d; ++jp) sum += corr(j - 1, jp - 1) * dV[j] * model_.coefficient(k, jp, x);
    }
  }
  return 0.5 * sum;
}

std::vector<double> VolterraSolver::solve(const Eigen::MatrixXd& increments, Trajectory* trajectory,
                                          bool ito_correction) const {
  const int D = grid_.steps;
  const int n = model_.states();
  const int d = model_.drivers();
  if (increments.rows() != D || increments.cols() != d + 1) {
    throw std::invalid_argument("increments must be steps x (drivers + 1)");
  }
  const double h = grid_.step();
  const auto& x0 = model_.x0();
  std::vector<double> X(static_cast<std::size_t>(D + 1) * n);
  std::vector<double> F(static_cast<std::size_t>(D) * n);
  std::vector<double> running(n, 0.0);  // running sums for constant kernels
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) X[i] = x0[i];

  for (int l = 1; l <= D; ++l) {
    const int a = l - 1;
    for (int i = 0; i < n; ++i) x[i] = X[static_cast<std::size_t>(a) * n + i];
    for (int i = 0; i < n; ++i) {
      double f = 0.0;
      for (int j : active_[i]) f += model_.coefficient(i, j, x) * increments(a, j);
      if (ito_correction && model_.is_semimartingale(i)) f += ito_drift(i, x) * h;
      F[static_cast<std::size_t>(a) * n + i] = f;
    }
    for (int i = 0; i < n; ++i) {
      double v;
      if (model_.is_semimartingale(i)) {
        running[i] += F[static_cast<std::size_t>(a) * n + i];
        v = x0[i] + running[i];
      } else {
        const auto& w = lag_weights_[i];
        double s = 0.0;
        for (int b = 0; b < l; ++b) s += w[l - b] * F[static_cast<std::size_t>(b) * n + i];
        v = x0[i] + s;
      }
      if (!std::isfinite(v)) {
        std::ostringstream os;
        os << "non-finite state " << model_.state_names()[i] << " at step " << l << " of " << D;
        throw NumericalError(os.str(), l, i);
      }
      X[static_cast<std::size_t>(l) * n + i] = v;
    }
  }
  if (trajectory) {
    trajectory->times.resize(D + 1);
    trajectory->states.resize(D + 1, n);
    for (int l = 0; l <= D; ++l) {
      trajectory->times[l] = l * h;
      for (int i = 0; i < n; ++i) trajectory->states(l, i) = X[static_cast<std::size_t>(l) * n + i];
    }
  }
  return {X.end() - n, X.end()};
}

Eigen::MatrixXd midpoint_increments(const CompositePath& path, const SolveGrid& grid) {
  grid.validate();
  const int D = grid.steps;
  const double h = grid.step();
  const double tol = 1e-9 * std::max(1.0, grid.horizon);
  if (std::abs(path.start()) > tol || std::abs(path.end() - grid.horizon) > tol) {
    throw std::invalid_argument("path must span the grid interval [0, T]");
  }
  const int d = path.drivers();
  Eigen::MatrixXd omega(D + 2, d);  // row r holds omega at time (r - 1) h
  omega.row(0).setZero();
  for (int r = 1; r <= D + 1; ++r) {
    const double t = r == D + 1 ? grid.horizon : (r - 1) * h;
    for (int j = 0; j < d; ++j) omega(r, j) = path.value(t, j);
  }
  Eigen::MatrixXd inc(D, d + 1);
  for (int a = 0; a < D; ++a) {
    inc(a, 0) = h;
    for (int j = 0; j < d; ++j) inc(a, j + 1) = 0.5 * (omega(a + 2, j) - omega(a, j));
  }
  return inc;
}

std::vector<double> solve_along_path(const SVIEModel& model, const CompositePath& path, const SolveGrid& grid,
                                     Trajectory* trajectory) {
  if (path.drivers() != model.drivers()) throw std::invalid_argument("path and model driver counts differ");
  VolterraSolver solver(model, grid);
  return solver.solve(midpoint_increments(path, grid), trajectory);
}

}  // namespace svcub
