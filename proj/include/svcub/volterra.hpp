#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

#include "svcub/cubature.hpp"
#include "svcub/model.hpp"

namespace svcub {

struct SolveGrid {
  int steps = 100;
  double horizon = 1.0;
  double step() const { return horizon / steps; }
  void validate() const;
};

struct Trajectory {
  std::vector<double> times;
  Eigen::MatrixXd states;  // (steps + 1) x state count
};

class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, int step, int coordinate)
      : std::runtime_error(what), step_(step), coordinate_(coordinate) {}
  int step() const { return step_; }
  int coordinate() const { return coordinate_; }

 private:
  int step_;
  int coordinate_;
};

// X_l = x0 + sum_{a < l} K(lh, ah) [sum_j V_j(X_a) inc(a, j) (+ Ito drift h)], l = 0..D.
// Column 0 of the increments is the dt weight, column j >= 1 the increment of driver j.
class VolterraSolver {
 public:
  VolterraSolver(const SVIEModel& model, SolveGrid grid);

  const SolveGrid& grid() const { return grid_; }
  const SVIEModel& model() const { return model_; }

  // Terminal state; with ito_correction the drift of constant-kernel states gets
  // 1/2 sum rho_{jj'} d_k V^i_j V^k_{j'} over constant-kernel k (finite differences).
  std::vector<double> solve(const Eigen::MatrixXd& increments, Trajectory* trajectory = nullptr,
                            bool ito_correction = false) const;

 private:
  double ito_drift(int i, std::vector<double>& x) const;

  const SVIEModel& model_;
  SolveGrid grid_;
  std::vector<std::vector<double>> lag_weights_;  // K_i(m h, 0), m = 0..D
  std::vector<std::vector<int>> active_;          // non-zero coefficient indices per state
};

// Midpoint increments (omega_{(a+1)h} - omega_{(a-1)h}) / 2 with omega_{-h} = 0 for the drivers;
// the time coordinate omega^0_t = t contributes h at every node.
Eigen::MatrixXd midpoint_increments(const CompositePath& path, const SolveGrid& grid);

std::vector<double> solve_along_path(const SVIEModel& model, const CompositePath& path, const SolveGrid& grid,
                                     Trajectory* trajectory = nullptr);

}  // namespace svcub
