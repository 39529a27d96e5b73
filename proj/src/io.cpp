#include "svcub/io.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace svcub {
namespace {

const char* family_name(CoefficientFamily f) {
  switch (f) {
    case CoefficientFamily::zero: return "zero";
    case CoefficientFamily::constant: return "const";
    case CoefficientFamily::identity: return "U";
    case CoefficientFamily::affine: return "affine";
    case CoefficientFamily::cos: return "cos";
    case CoefficientFamily::sqrt: return "sqrt";
    case CoefficientFamily::user: return "user";
  }
  return "zero";
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

json coefficient_to_json(const CoefficientSpec& c) {
  json j = {{"family", family_name(c.family)}, {"arg", c.arg}};
  if (!c.params.empty()) j["params"] = c.params;
  if (c.scale_state >= 0) j["times"] = c.scale_state;
  if (c.family == CoefficientFamily::user) j["name"] = c.user_name;
  return j;
}

// String shorthand ("cos", "affine:0.5,-0.33") reads the owning state; objects may set
// "arg" and "times" (multiply by that state coordinate).
CoefficientSpec coefficient_from_json(const json& j, int own_state) {
  if (j.is_string()) return CoefficientSpec::parse(j.get<std::string>(), own_state);
  if (j.is_number()) return CoefficientSpec::constant(j.get<double>());
  if (!j.is_object()) throw FormatError("coefficient must be a string, number or object");
  const std::string fam = j.at("family").get<std::string>();
  const int arg = get_or<int>(j, "arg", own_state);
  CoefficientSpec c;
  if (fam == "const") {
    c = CoefficientSpec::constant(j.at("params").at(0).get<double>());
  } else if (fam == "affine") {
    const auto p = j.at("params").get<std::vector<double>>();
    if (p.size() != 2) throw FormatError("affine coefficient needs params [c0, c1]");
    c = CoefficientSpec::affine(arg, p[0], p[1]);
  } else if (fam == "user") {
    c = CoefficientSpec::user(j.at("name").get<std::string>());
    c.arg = arg;
  } else {
    c = CoefficientSpec::parse(fam, arg);
  }
  if (j.contains("times")) c = c.scaled_by(j.at("times").get<int>());
  return c;
}

json kernel_to_json(const Kernel& k) {
  if (k.is_constant()) return "one";
  return {{"type", "power_law"}, {"H", k.hurst()}};
}

Kernel kernel_from_json(const json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "one") return Kernel::one();
    if (s.rfind("power_law:", 0) == 0) return Kernel::power_law(std::stod(s.substr(10)));
    throw FormatError("unknown kernel '" + s + "' (expected one or power_law:H)");
  }
  if (j.is_object() && get_or<std::string>(j, "type", "") == "power_law") {
    return Kernel::power_law(j.at("H").get<double>());
  }
  if (j.is_object() && get_or<std::string>(j, "type", "") == "one") return Kernel::one();
  throw FormatError("kernel must be \"one\", \"power_law:H\" or {\"type\": \"power_law\", \"H\": ...}");
}

Eigen::MatrixXd matrix_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw FormatError(std::string(what) + " must be a non-empty array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = j.at(0).size();
  Eigen::MatrixXd m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (j.at(r).size() != cols) throw FormatError(std::string(what) + " rows differ in length");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = j.at(r).at(c).get<double>();
  }
  return m;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

void csv_number(std::ostream& os, double v) { os << std::setprecision(17) << v; }

}  // namespace

json measure_to_json(const CubatureMeasure& measure, const MomentSystem* system, int periods) {
  json j;
  j["format"] = "svcub-measure";
  j["version"] = 1;
  j["name"] = measure.name;
  j["start"] = measure.start();
  j["horizon"] = measure.horizon();
  j["periods"] = periods;
  j["segments"] = measure.segments();
  j["drivers"] = measure.drivers();
  json atoms = json::array();
  for (const auto& a : measure.atoms()) atoms.push_back({{"weight", a.weight}, {"slopes", matrix_to_json(a.slopes)}});
  j["atoms"] = atoms;
  if (system) {
    j["system"] = {{"name", system->name}, {"params", system->params}, {"equations", system->equation_count()}};
  }
  return j;
}

int stored_periods(const json& j) { return get_or<int>(j, "periods", 1); }

CubatureMeasure measure_from_json(const json& j) {
  try {
    if (get_or<std::string>(j, "format", "svcub-measure") != "svcub-measure") {
      throw FormatError("not a measure file (format field)");
    }
    std::vector<Atom> atoms;
    for (const auto& a : j.at("atoms")) atoms.push_back({a.at("weight").get<double>(), matrix_from_json(a.at("slopes"), "slopes")});
    CubatureMeasure m(get_or<double>(j, "start", 0.0), j.at("horizon").get<double>(), std::move(atoms));
    m.name = get_or<std::string>(j, "name", "");
    return m;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed measure: ") + e.what());
  }
}

void save_measure(const std::string& path, const CubatureMeasure& measure, const MomentSystem* system, int periods) {
  write_json_file(path, measure_to_json(measure, system, periods));
}

CubatureMeasure load_measure(const std::string& path) { return measure_from_json(read_json_file(path)); }

SVIEModel model_from_json(const json& j) {
  try {
    if (j.contains("preset")) {
      const std::string p = j.at("preset").get<std::string>();
      if (p == "linear") return linear_model(get_or<double>(j, "H", 1.5), get_or<double>(j, "x0", 0.0));
      if (p == "cos") return cos_model(get_or<double>(j, "H", 1.5), get_or<double>(j, "x0", 1.0));
      if (p == "heston") {
        HestonSpec s;
        s.hurst = get_or<double>(j, "H", s.hurst);
        s.rho = get_or<double>(j, "rho", s.rho);
        s.s0 = get_or<double>(j, "s0", s.s0);
        s.u0 = get_or<double>(j, "u0", s.u0);
        s.b1 = get_or<std::string>(j, "b1", s.b1);
        s.sigma1 = get_or<std::string>(j, "sigma1", s.sigma1);
        s.sigma2 = get_or<std::string>(j, "sigma2", s.sigma2);
        return heston_model(s);
      }
      throw FormatError("unknown model preset '" + p + "' (expected linear, cos, heston)");
    }
    const int d = j.at("drivers").get<int>();
    const auto& states = j.at("states");
    std::vector<Kernel> kernels;
    std::vector<std::vector<CoefficientSpec>> coeffs;
    std::vector<double> x0;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < states.size(); ++i) {
      const auto& s = states[i];
      kernels.push_back(kernel_from_json(s.at("kernel")));
      x0.push_back(s.at("x0").get<double>());
      names.push_back(get_or<std::string>(s, "name", "x" + std::to_string(i)));
      const auto& c = s.at("coefficients");
      if (c.size() != static_cast<std::size_t>(d + 1)) {
        throw FormatError("state " + names.back() + " needs drivers + 1 coefficients (drift first)");
      }
      std::vector<CoefficientSpec> row;
      for (const auto& e : c) row.push_back(coefficient_from_json(e, static_cast<int>(i)));
      coeffs.push_back(std::move(row));
    }
    Eigen::MatrixXd corr = j.contains("correlation") ? matrix_from_json(j.at("correlation"), "correlation")
                                                     : Eigen::MatrixXd::Identity(d, d);
    SVIEModel m(d, std::move(kernels), std::move(coeffs), corr, std::move(x0), std::move(names));
    m.label = get_or<std::string>(j, "label", "custom");
    return m;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed model: ") + e.what());
  }
}

json model_to_json(const SVIEModel& model) {
  json states = json::array();
  for (int i = 0; i < model.states(); ++i) {
    json coeffs = json::array();
    for (int j = 0; j <= model.drivers(); ++j) coeffs.push_back(coefficient_to_json(model.coefficient_spec(i, j)));
    states.push_back({{"name", model.state_names()[i]},
                      {"kernel", kernel_to_json(model.kernel(i))},
                      {"x0", model.x0()[i]},
                      {"coefficients", coeffs}});
  }
  return {{"label", model.label},
          {"drivers", model.drivers()},
          {"states", states},
          {"correlation", matrix_to_json(model.correlation())}};
}

SVIEModel load_model(const std::string& path) { return model_from_json(read_json_file(path)); }

json moment_system_to_json(const MomentSystem& system, bool with_expectations) {
  json conds = json::array();
  for (const auto& c : system.conditions) {
    json terms = json::array();
    for (const auto& t : c.terms) {
      json term = {{"coef", t.coef}, {"spec", t.spec.describe()}, {"word", t.spec.word}};
      if (with_expectations) {
        const MomentValue v = wiener_expectation(t.spec, system.kernels, system.corr);
        term["expectation"] = v.value;
        term["method"] = to_string(v.method);
      }
      terms.push_back(term);
    }
    conds.push_back({{"label", c.label}, {"target", c.target}, {"terms", terms}});
  }
  json kernels = json::array();
  for (const auto& k : system.kernels) kernels.push_back(kernel_to_json(k));
  return {{"name", system.name},
          {"drivers", system.drivers},
          {"start", system.start},
          {"horizon", system.horizon},
          {"kernels", kernels},
          {"correlation", matrix_to_json(system.corr)},
          {"params", system.params},
          {"weight_constraint", system.weight_constraint},
          {"equations", system.equation_count()},
          {"conditions", conds}};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  out << std::setw(2) << j << "\n";
}

void write_residuals_csv(std::ostream& os, const std::vector<ResidualRow>& rows) {
  os << "label,lhs,target,residual,relative\n";
  for (const auto& r : rows) {
    os << '"' << r.label << "\",";
    csv_number(os, r.lhs);
    os << ',';
    csv_number(os, r.target);
    os << ',';
    csv_number(os, r.residual);
    os << ',';
    csv_number(os, r.relative);
    os << '\n';
  }
}

void write_paths_csv(std::ostream& os, const CubatureMeasure& measure, int samples) {
  os << "atom,weight,t";
  for (int j = 0; j < measure.drivers(); ++j) os << ",omega" << j + 1;
  os << '\n';
  for (std::size_t k = 0; k < measure.size(); ++k) {
    const PiecewiseLinearPath p = measure.path(k);
    for (int s = 0; s <= samples; ++s) {
      const double t = measure.start() + measure.horizon() * s / samples;
      os << k << ',';
      csv_number(os, measure.atom(k).weight);
      os << ',';
      csv_number(os, t);
      for (int j = 0; j < measure.drivers(); ++j) {
        os << ',';
        csv_number(os, p.value(t, j));
      }
      os << '\n';
    }
  }
}

void write_trajectory_csv(std::ostream& os, const Trajectory& trajectory, const std::vector<std::string>& names) {
  os << "t";
  for (const auto& n : names) os << ',' << n;
  os << '\n';
  for (std::size_t r = 0; r < trajectory.times.size(); ++r) {
    csv_number(os, trajectory.times[r]);
    for (Eigen::Index c = 0; c < trajectory.states.cols(); ++c) {
      os << ',';
      csv_number(os, trajectory.states(static_cast<Eigen::Index>(r), c));
    }
    os << '\n';
  }
}

void write_price_csv(std::ostream& os, const std::vector<PriceResult>& results, bool header) {
  if (header) os << "method,value,std_error,atoms,steps,periods,order,seed,samples,seconds\n";
  for (const auto& r : results) {
    os << r.method << ',';
    csv_number(os, r.value);
    os << ',';
    csv_number(os, r.std_error);
    os << ',' << r.atoms << ',' << r.steps << ',' << r.periods << ',' << r.order << ',' << r.seed << ','
       << r.samples << ',' << r.seconds << '\n';
  }
}

void write_comparison_csv(std::ostream& os, const ComparisonReport& report) {
  os << "repeat,euler_value,euler_error\n";
  for (std::size_t i = 0; i < report.euler_values.size(); ++i) {
    os << i << ',';
    csv_number(os, report.euler_values[i]);
    os << ',';
    csv_number(os, report.euler_errors[i]);
    os << '\n';
  }
}

}  // namespace svcub
