#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "svcub/kernel.hpp"

namespace svcub {

using StateView = std::span<const double>;
using CoefficientFn = std::function<double(StateView)>;

enum class CoefficientFamily { zero, constant, identity, affine, cos, sqrt, user };

// One coefficient field V^i_j as a closed family, optionally multiplied by a state coordinate.
struct CoefficientSpec {
  CoefficientFamily family = CoefficientFamily::zero;
  int arg = 0;                 // state coordinate read by the family
  std::vector<double> params;  // constant: {c}; affine: {c0, c1}
  int scale_state = -1;        // >= 0: result multiplied by x[scale_state]
  std::string user_name;       // registered function name for the user family

  static CoefficientSpec zero();
  static CoefficientSpec constant(double c);
  static CoefficientSpec identity(int arg);
  static CoefficientSpec affine(int arg, double c0, double c1);
  static CoefficientSpec cosine(int arg);
  static CoefficientSpec square_root(int arg);
  static CoefficientSpec user(const std::string& name);
  // Parses the short names used by model files and flags: U, cos, sqrt, affine:c0,c1, const:c, zero.
  static CoefficientSpec parse(const std::string& text, int arg);

  CoefficientSpec scaled_by(int state) const;
  bool is_zero() const { return family == CoefficientFamily::zero; }
  CoefficientFn compile() const;
  std::string describe() const;
};

// Registers a callable under a name usable as CoefficientSpec::user(name).
void register_coefficient(const std::string& name, CoefficientFn fn);
bool has_registered_coefficient(const std::string& name);

class SVIEModel {
 public:
  SVIEModel(int drivers, std::vector<Kernel> kernels,
            std::vector<std::vector<CoefficientSpec>> coefficients, Eigen::MatrixXd correlation,
            std::vector<double> x0, std::vector<std::string> state_names = {});

  int drivers() const { return drivers_; }
  int states() const { return static_cast<int>(kernels_.size()); }
  const std::vector<Kernel>& kernels() const { return kernels_; }
  const Kernel& kernel(int i) const { return kernels_.at(i); }
  const Eigen::MatrixXd& correlation() const { return corr_; }
  // Any factor A with A A^T = correlation (Cholesky when positive definite).
  const Eigen::MatrixXd& correlation_factor() const { return corr_factor_; }
  const std::vector<double>& x0() const { return x0_; }
  const std::vector<std::string>& state_names() const { return names_; }
  const CoefficientSpec& coefficient_spec(int i, int j) const { return specs_.at(i).at(j); }
  bool coefficient_is_zero(int i, int j) const { return specs_[i][j].is_zero(); }

  // V^i_j(x); j = 0 is the drift.
  double coefficient(int i, int j, StateView x) const { return fns_[i][j](x); }

  // States with the constant kernel (semimartingale components).
  bool is_semimartingale(int i) const { return kernels_.at(i).is_constant(); }
  std::vector<int> semimartingale_states() const;

  std::string label;

 private:
  int drivers_;
  std::vector<Kernel> kernels_;
  std::vector<std::vector<CoefficientSpec>> specs_;
  std::vector<std::vector<CoefficientFn>> fns_;
  Eigen::MatrixXd corr_;
  Eigen::MatrixXd corr_factor_;
  std::vector<double> x0_;
  std::vector<std::string> names_;
};

// X = x0 + int K dB with V = 1.
SVIEModel linear_model(double hurst, double x0);
// X = x0 + int K cos(X) dB.
SVIEModel cos_model(double hurst, double x0);

// dS = S b1(U) dt + S sigma1(U) o dB1,
// U = U0 + int K [1/2 - U/3] ds + int K sigma2(U) o dB2, corr(B1, B2) = rho.
struct HestonSpec {
  double hurst = 1.5;
  double rho = 0.5;
  double s0 = 1.0;
  double u0 = 1.0;
  std::string b1 = "U";
  std::string sigma1 = "cos";
  std::string sigma2 = "cos";
};
SVIEModel heston_model(const HestonSpec& spec);

struct HypothesisEntry {
  int state = 0;
  std::string kernel;
  bool h0 = true;        // kernel admissible (constant or H > 1/2)
  bool regular = true;   // regularity for the requested order
  double threshold = 0;  // H must exceed this for power-law kernels
};

struct HypothesisReport {
  int order = 3;
  std::vector<HypothesisEntry> entries;
  std::vector<std::string> warnings;
  bool all_satisfied() const { return warnings.empty(); }
};

// Advisory: power-law states need H > N/2 for the order-N constructions.
HypothesisReport validate_hypotheses(const SVIEModel& model, int order);

}  // namespace svcub
