#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "svcub/kernel.hpp"
#include "svcub/moments.hpp"

namespace svcub {

// Piecewise-linear driver path on [start, start + horizon] with L uniform segments;
// on segment l the increment of driver j is slopes(l, j) / sqrt(horizon) dt.
class PiecewiseLinearPath {
 public:
  PiecewiseLinearPath(double start, double horizon, Eigen::MatrixXd slopes);

  double start() const { return start_; }
  double horizon() const { return horizon_; }
  double end() const { return start_ + horizon_; }
  int segments() const { return static_cast<int>(slopes_.rows()); }
  int drivers() const { return static_cast<int>(slopes_.cols()); }
  const Eigen::MatrixXd& slopes() const { return slopes_; }
  double segment_start(int l) const { return start_ + horizon_ * l / segments(); }
  // d omega^j / dt on segment l (j is 0-based).
  double rate(int l, int j) const { return slopes_(l, j) / std::sqrt(horizon_); }
  // omega^j_t - omega^j_start, clamped to the path interval.
  double value(double t, int j) const;
  // Full increment over the interval.
  double increment(int j) const;
  PiecewiseLinearPath mirrored() const { return PiecewiseLinearPath(start_, horizon_, -slopes_); }

 private:
  double start_;
  double horizon_;
  Eigen::MatrixXd slopes_;
};

// Polynomial in the dimensionless slope entries; variable index = l * drivers + j.
struct SlopeMonomial {
  double coef = 0.0;
  std::vector<int> vars;
};

struct SlopePolynomial {
  int segments = 0;
  int drivers = 0;
  int stochastic_legs = 0;
  std::vector<SlopeMonomial> terms;

  double eval(const Eigen::MatrixXd& slopes) const;
  // Adds scale * d(poly)/d(slope var) into grad (size segments * drivers).
  void accumulate_gradient(const Eigen::MatrixXd& slopes, double scale, Eigen::Ref<Eigen::VectorXd> grad) const;
};

// Cell coefficient: integral over the ordered cell (legs in segments cells[0] >= cells[1] >= ...)
// of the kernel factors and monomials, without slope factors, on [start, start + horizon].
double cell_coefficient(const IteratedIntegralSpec& spec, std::span<const Kernel> kernels, int segments,
                        std::span<const int> cells);

// Expands the spec over all ordered cells into a polynomial in the slopes, including the
// 1/sqrt(horizon) scaling of each stochastic leg. The spec interval defines the horizon.
SlopePolynomial expand_on_cells(const IteratedIntegralSpec& spec, std::span<const Kernel> kernels, int segments,
                                int drivers);

double path_iterated_integral(const IteratedIntegralSpec& spec, const PiecewiseLinearPath& path,
                              std::span<const Kernel> kernels);

}  // namespace svcub
