#include "svcub/model.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace svcub {
namespace {

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

std::map<std::string, CoefficientFn>& registry() {
  static std::map<std::string, CoefficientFn> r;
  return r;
}

std::vector<double> parse_numbers(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw std::invalid_argument("cannot parse number '" + item + "' in '" + text + "'");
    }
  }
  return out;
}

}  // namespace

CoefficientSpec CoefficientSpec::zero() { return {}; }

CoefficientSpec CoefficientSpec::constant(double c) {
  CoefficientSpec s;
  s.family = CoefficientFamily::constant;
  s.params = {c};
  return s;
}

CoefficientSpec CoefficientSpec::identity(int arg) {
  CoefficientSpec s;
  s.family = CoefficientFamily::identity;
  s.arg = arg;
  return s;
}

CoefficientSpec CoefficientSpec::affine(int arg, double c0, double c1) {
  CoefficientSpec s;
  s.family = CoefficientFamily::affine;
  s.arg = arg;
  s.params = {c0, c1};
  return s;
}

CoefficientSpec CoefficientSpec::cosine(int arg) {
  CoefficientSpec s;
  s.family = CoefficientFamily::cos;
  s.arg = arg;
  return s;
}

CoefficientSpec CoefficientSpec::square_root(int arg) {
  CoefficientSpec s;
  s.family = CoefficientFamily::sqrt;
  s.arg = arg;
  return s;
}

CoefficientSpec CoefficientSpec::user(const std::string& name) {
  CoefficientSpec s;
  s.family = CoefficientFamily::user;
  s.user_name = name;
  return s;
}

CoefficientSpec CoefficientSpec::parse(const std::string& text, int arg) {
  if (text == "zero" || text == "0") return zero();
  if (text == "U" || text == "x" || text == "identity") return identity(arg);
  if (text == "cos") return cosine(arg);
  if (text == "sqrt") return square_root(arg);
  if (text.rfind("const:", 0) == 0) {
    auto v = parse_numbers(text.substr(6));
    if (v.size() != 1) throw std::invalid_argument("const: expects one number");
    return constant(v[0]);
  }
  if (text.rfind("affine:", 0) == 0) {
    auto v = parse_numbers(text.substr(7));
    if (v.size() != 2) throw std::invalid_argument("affine: expects two numbers c0,c1");
    return affine(arg, v[0], v[1]);
  }
  if (text.rfind("user:", 0) == 0) return user(text.substr(5));
  throw std::invalid_argument("unknown coefficient family '" + text +
                              "' (expected zero, U, cos, sqrt, const:c, affine:c0,c1, user:name)");
}

CoefficientSpec CoefficientSpec::scaled_by(int state) const {
  CoefficientSpec s = *this;
  s.scale_state = state;
  return s;
}

CoefficientFn CoefficientSpec::compile() const {
  CoefficientFn base;
  const int a = arg;
  switch (family) {
    case CoefficientFamily::zero:
      return [](StateView) { return 0.0; };
    case CoefficientFamily::constant: {
      const double c = params.at(0);
      base = [c](StateView) { return c; };
      break;
    }
    case CoefficientFamily::identity:
      base = [a](StateView x) { return x[a]; };
      break;
    case CoefficientFamily::affine: {
      const double c0 = params.at(0), c1 = params.at(1);
      base = [a, c0, c1](StateView x) { return c0 + c1 * x[a]; };
      break;
    }
    case CoefficientFamily::cos:
      base = [a](StateView x) { return std::cos(x[a]); };
      break;
    case CoefficientFamily::sqrt:
      base = [a](StateView x) { return std::sqrt(std::max(x[a], 0.0)); };
      break;
    case CoefficientFamily::user: {
      std::lock_guard<std::mutex> lock(registry_mutex());
      auto it = registry().find(user_name);
      if (it == registry().end()) {
        throw std::invalid_argument("unregistered coefficient function '" + user_name + "'");
      }
      base = it->second;
      break;
    }
  }
  if (scale_state < 0) return base;
  const int s = scale_state;
  return [base, s](StateView x) { return x[s] * base(x); };
}

std::string CoefficientSpec::describe() const {
  std::ostringstream os;
  if (scale_state >= 0) os << "x" << scale_state << "*";
  switch (family) {
    case CoefficientFamily::zero: return "0";
    case CoefficientFamily::constant: os << params.at(0); break;
    case CoefficientFamily::identity: os << "x" << arg; break;
    case CoefficientFamily::affine: os << "(" << params.at(0) << "+" << params.at(1) << "*x" << arg << ")"; break;
    case CoefficientFamily::cos: os << "cos(x" << arg << ")"; break;
    case CoefficientFamily::sqrt: os << "sqrt(x" << arg << "+)"; break;
    case CoefficientFamily::user: os << user_name << "(x)"; break;
  }
  return os.str();
}

void register_coefficient(const std::string& name, CoefficientFn fn) {
  if (!fn) throw std::invalid_argument("cannot register an empty coefficient function");
  std::lock_guard<std::mutex> lock(registry_mutex());
  registry()[name] = std::move(fn);
}

bool has_registered_coefficient(const std::string& name) {
  std::lock_guard<std::mutex> lock(registry_mutex());
  return registry().count(name) > 0;
}

SVIEModel::SVIEModel(int drivers, std::vector<Kernel> kernels,
                     std::vector<std::vector<CoefficientSpec>> coefficients,
                     Eigen::MatrixXd correlation, std::vector<double> x0,
                     std::vector<std::string> state_names)
    : drivers_(drivers),
      kernels_(std::move(kernels)),
      specs_(std::move(coefficients)),
      corr_(std::move(correlation)),
      x0_(std::move(x0)),
      names_(std::move(state_names)) {
  const int n = static_cast<int>(kernels_.size());
  if (drivers_ < 1) throw std::invalid_argument("model needs at least one driver");
  if (n < 1) throw std::invalid_argument("model needs at least one state");
  if (static_cast<int>(x0_.size()) != n) throw std::invalid_argument("x0 size must equal the state count");
  if (static_cast<int>(specs_.size()) != n) throw std::invalid_argument("one coefficient row per state required");
  for (const auto& row : specs_) {
    if (static_cast<int>(row.size()) != drivers_ + 1) {
      throw std::invalid_argument("each coefficient row needs drivers + 1 entries (drift first)");
    }
    for (const auto& c : row) {
      if (c.arg < 0 || c.arg >= n || c.scale_state >= n) {
        throw std::invalid_argument("coefficient reads a state index out of range");
      }
    }
  }
  if (corr_.rows() != drivers_ || corr_.cols() != drivers_) {
    throw std::invalid_argument("correlation must be drivers x drivers");
  }
  for (int a = 0; a < drivers_; ++a) {
    if (std::abs(corr_(a, a) - 1.0) > 1e-12) throw std::invalid_argument("correlation diagonal must be 1");
    for (int b = 0; b < drivers_; ++b) {
      if (std::abs(corr_(a, b) - corr_(b, a)) > 1e-12) throw std::invalid_argument("correlation must be symmetric");
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(corr_);
  if (llt.info() == Eigen::Success) {
    corr_factor_ = llt.matrixL();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(corr_);
    if (eig.eigenvalues().minCoeff() < -1e-10) {
      throw std::invalid_argument("correlation matrix is not positive semidefinite");
    }
    corr_factor_ = eig.eigenvectors() * eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
  }
  if (names_.empty()) {
    for (int i = 0; i < n; ++i) names_.push_back("x" + std::to_string(i));
  }
  fns_.resize(n);
  for (int i = 0; i < n; ++i) {
    for (const auto& c : specs_[i]) fns_[i].push_back(c.compile());
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= drivers_; ++j) {
      const double v = fns_[i][j](StateView(x0_));
      if (!std::isfinite(v)) {
        throw std::invalid_argument("coefficient V^" + std::to_string(i) + "_" + std::to_string(j) +
                                    " is not finite at x0");
      }
    }
  }
}

std::vector<int> SVIEModel::semimartingale_states() const {
  std::vector<int> out;
  for (int i = 0; i < states(); ++i) {
    if (is_semimartingale(i)) out.push_back(i);
  }
  return out;
}

SVIEModel linear_model(double hurst, double x0) {
  SVIEModel m(1, {Kernel::power_law(hurst)}, {{CoefficientSpec::zero(), CoefficientSpec::constant(1.0)}},
              Eigen::MatrixXd::Identity(1, 1), {x0}, {"X"});
  m.label = "linear";
  return m;
}

SVIEModel cos_model(double hurst, double x0) {
  SVIEModel m(1, {Kernel::power_law(hurst)}, {{CoefficientSpec::zero(), CoefficientSpec::cosine(0)}},
              Eigen::MatrixXd::Identity(1, 1), {x0}, {"X"});
  m.label = "cos";
  return m;
}

SVIEModel heston_model(const HestonSpec& spec) {
  if (std::abs(spec.rho) > 1.0) throw std::invalid_argument("|rho| must not exceed 1");
  Eigen::MatrixXd corr(2, 2);
  corr << 1.0, spec.rho, spec.rho, 1.0;
  std::vector<std::vector<CoefficientSpec>> coeffs = {
      {CoefficientSpec::parse(spec.b1, 1).scaled_by(0), CoefficientSpec::parse(spec.sigma1, 1).scaled_by(0),
       CoefficientSpec::zero()},
      {CoefficientSpec::affine(1, 0.5, -1.0 / 3.0), CoefficientSpec::zero(), CoefficientSpec::parse(spec.sigma2, 1)}};
  SVIEModel m(2, {Kernel::one(), Kernel::power_law(spec.hurst)}, std::move(coeffs), corr, {spec.s0, spec.u0},
              {"S", "U"});
  m.label = "heston";
  return m;
}

HypothesisReport validate_hypotheses(const SVIEModel& model, int order) {
  HypothesisReport report;
  report.order = order;
  const double threshold = 0.5 * order;
  for (int i = 0; i < model.states(); ++i) {
    const Kernel& k = model.kernel(i);
    HypothesisEntry e;
    e.state = i;
    e.kernel = k.describe();
    e.threshold = threshold;
    if (!k.is_constant()) {
      e.h0 = k.hurst() > 0.5;
      e.regular = k.hurst() > threshold;
      if (!e.regular) {
        std::ostringstream os;
        os << "state " << model.state_names()[i] << ": H = " << k.hurst() << " <= " << threshold
           << " (order " << order << " regularity not met; accuracy may degrade)";
        report.warnings.push_back(os.str());
      }
    }
    report.entries.push_back(e);
  }
  return report;
}

}  // namespace svcub
