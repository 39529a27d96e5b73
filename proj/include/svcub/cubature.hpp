#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "svcub/moment_systems.hpp"
#include "svcub/path.hpp"

namespace svcub {

struct Atom {
  double weight = 0.0;
  Eigen::MatrixXd slopes;  // segments x drivers, dimensionless
};

// One-period cubature measure: explicit weighted atoms (mirrors included) on [start, start + horizon].
class CubatureMeasure {
 public:
  CubatureMeasure(double start, double horizon, std::vector<Atom> atoms);

  // Each half path and its mirror carry the given weight; an all-zero path becomes one atom
  // with doubled weight.
  static CubatureMeasure symmetric(double start, double horizon, const std::vector<double>& half_weights,
                                   const std::vector<Eigen::MatrixXd>& half_slopes);

  double start() const { return start_; }
  double horizon() const { return horizon_; }
  double end() const { return start_ + horizon_; }
  int segments() const { return static_cast<int>(atoms_.front().slopes.rows()); }
  int drivers() const { return static_cast<int>(atoms_.front().slopes.cols()); }
  std::size_t size() const { return atoms_.size(); }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const Atom& atom(std::size_t k) const { return atoms_.at(k); }
  PiecewiseLinearPath path(std::size_t k) const { return {start_, horizon_, atoms_.at(k).slopes}; }
  double weight_sum() const;
  double max_abs_slope() const;
  // True when every atom has a mirror of equal weight (zero atoms are self-mirrored).
  bool is_symmetric(double tol = 1e-12) const;
  // Same dimensionless slopes on another interval.
  CubatureMeasure moved(double start, double horizon) const;

  std::string name;

 private:
  double start_;
  double horizon_;
  std::vector<Atom> atoms_;
};

// E^Q of a spec: sum over atoms of weight * path integral.
double measure_expectation(const IteratedIntegralSpec& spec, const CubatureMeasure& measure,
                           std::span<const Kernel> kernels);

// Concatenation of per-period paths.
class CompositePath {
 public:
  explicit CompositePath(std::vector<PiecewiseLinearPath> pieces);
  double start() const { return pieces_.front().start(); }
  double end() const { return pieces_.back().end(); }
  int drivers() const { return pieces_.front().drivers(); }
  const std::vector<PiecewiseLinearPath>& pieces() const { return pieces_; }
  // omega^j_t (0 at start), closed piecewise-affine formula.
  double value(double t, int j) const;

 private:
  std::vector<PiecewiseLinearPath> pieces_;
};

// Independent product of contiguous per-period measures; atoms enumerated in mixed radix with
// the first period as the most significant digit.
class ComposedMeasure {
 public:
  explicit ComposedMeasure(std::vector<CubatureMeasure> periods);

  int periods() const { return static_cast<int>(periods_.size()); }
  const CubatureMeasure& period(int m) const { return periods_.at(m); }
  double start() const { return periods_.front().start(); }
  double end() const { return periods_.back().end(); }
  int drivers() const { return periods_.front().drivers(); }
  std::size_t atom_count() const { return count_; }
  std::vector<int> digits(std::size_t index) const;
  double weight(std::size_t index) const;
  CompositePath path(std::size_t index) const;
  double weight_sum() const;

  template <class F>
  void for_each_atom(F&& f) const {
    for (std::size_t i = 0; i < count_; ++i) f(i, weight(i), path(i));
  }

 private:
  std::vector<CubatureMeasure> periods_;
  std::size_t count_ = 1;
};

ComposedMeasure compose(std::vector<CubatureMeasure> periods);
// Repeats the dimensionless slopes of `unit` on M equal periods of [start, start + horizon].
ComposedMeasure compose_uniform(const CubatureMeasure& unit, int periods, double horizon, double start = 0.0);

CubatureMeasure build_1d_multi_n3(double delta, double start = 0.0);
// Three-path family indexed by lambda1 in (0, 1/6]; default gives weights (1/6, 2/3, 1/6).
CubatureMeasure build_1d_multi_n5(double delta, double lambda1 = 1.0 / 6.0, double start = 0.0);

struct OnePeriodN3Constants {
  double c1, c2, c3, c4, a1, a2;
};
OnePeriodN3Constants oneperiod_n3_constants(double hurst, double horizon);
CubatureMeasure build_1d_oneperiod_n3(double hurst, double horizon);

// Default theta1 = arccos(rho) / 2, giving theta1 = pi/6, theta2 = -pi/6 at rho = 1/2.
CubatureMeasure build_2d_multi_n3(double delta, double rho, std::optional<double> theta1 = std::nullopt,
                                  double start = 0.0);

// Printed one-period N=5 paths for H = 3/2 (two half paths, four segments).
CubatureMeasure table4_measure(double horizon);

struct ResidualRow {
  std::string label;
  double lhs = 0.0;
  double target = 0.0;
  double residual = 0.0;  // lhs - target
  double relative = 0.0;  // |residual| / |target|, absolute when the target is 0
};

// Evaluates every condition (and the weight constraint when counted) against the measure.
std::vector<ResidualRow> verify_measure(const MomentSystem& system, const CubatureMeasure& measure);
double max_relative_residual(const std::vector<ResidualRow>& rows);

}  // namespace svcub
