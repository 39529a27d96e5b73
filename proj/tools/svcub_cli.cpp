#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include "svcub/io.hpp"
#include "svcub/repro.hpp"
#include "svcub/solver.hpp"

using namespace svcub;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitSolver = 3;
constexpr int kExitTolerance = 4;

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ModelOptions {
  std::string file;
  std::string preset = "linear";
  double hurst = 1.5;
  std::optional<double> x0;  // preset default when unset
  double u0 = 1.0;
  double rho = 0.5;
  std::string b1 = "U", sigma1 = "cos", sigma2 = "cos";
  std::string payoff = "cos";

  void add(CLI::App* app) {
    app->add_option("--model", file, "model JSON file (overrides --preset)");
    app->add_option("--preset", preset, "linear | cos | heston")->check(CLI::IsMember({"linear", "cos", "heston"}));
    app->add_option("--H", hurst, "Hurst parameter of the power-law kernel");
    app->add_option("--x0", x0, "initial value (S0 for heston); defaults 0 (linear), 1 (cos, heston)");
    app->add_option("--u0", u0, "initial variance state (heston)");
    app->add_option("--rho", rho, "driver correlation (heston)");
    app->add_option("--b1", b1, "heston drift family");
    app->add_option("--sigma1", sigma1, "heston price volatility family");
    app->add_option("--sigma2", sigma2, "heston variance volatility family");
    app->add_option("--G", payoff, "payoff: cos | x2 | x | call:K");
  }

  SVIEModel model() const {
    if (!file.empty()) return load_model(file);
    if (preset == "linear") return linear_model(hurst, x0.value_or(0.0));
    if (preset == "cos") return cos_model(hurst, x0.value_or(1.0));
    HestonSpec s;
    s.hurst = hurst;
    s.rho = rho;
    s.s0 = x0.value_or(1.0);
    s.u0 = u0;
    s.b1 = b1;
    s.sigma1 = sigma1;
    s.sigma2 = sigma2;
    return heston_model(s);
  }
};

struct PriceOptions {
  std::string method = "cub-multi";
  int order = 3;
  int periods = 1;
  int steps = 100;
  double horizon = 1.0;
  std::string measure_file;
  std::size_t samples = 500;
  std::uint64_t seed = 1;
  std::string csv;

  void add(CLI::App* app, bool with_method) {
    if (with_method) {
      app->add_option("--method", method, "cub-oneperiod | cub-multi | euler | oracle")
          ->check(CLI::IsMember({"cub-oneperiod", "cub-multi", "euler", "oracle"}));
    }
    app->add_option("--N", order, "cubature order (3 or 5)")->check(CLI::IsMember({3, 5}));
    app->add_option("--M", periods, "number of periods")->check(CLI::PositiveNumber);
    app->add_option("--D", steps, "time steps of the Volterra ODE solver")->check(CLI::PositiveNumber);
    app->add_option("--T", horizon, "maturity")->check(CLI::PositiveNumber);
    app->add_option("--measure", measure_file, "measure JSON from `cubature build` (one period, rescaled)");
    app->add_option("--samples", samples, "Euler paths per run")->check(CLI::PositiveNumber);
    app->add_option("--seed", seed, "Euler seed");
    app->add_option("--csv", csv, "write the result as CSV to this path");
  }
};

int threads_flag = 0;

double model_hurst(const SVIEModel& model, double fallback) {
  for (const auto& k : model.kernels()) {
    if (!k.is_constant()) return k.hurst();
  }
  return fallback;
}

ComposedMeasure cubature_for(const SVIEModel& model, const PriceOptions& p, bool multi, int& segments) {
  const int d = model.drivers();
  const double T = p.horizon;
  if (!p.measure_file.empty()) {
    const json j = read_json_file(p.measure_file);
    const CubatureMeasure unit = measure_from_json(j);
    if (unit.drivers() != d) throw ValidationError("measure driver count does not match the model");
    const int M = multi ? p.periods : 1;
    segments = unit.segments();
    return compose_uniform(unit, M, T);
  }
  const double H = model_hurst(model, 1.5);
  segments = 1;
  if (multi) {
    const int M = p.periods;
    if (d == 1 && p.order == 3) return compose_uniform(build_1d_multi_n3(T / M), M, T);
    if (d == 1 && p.order == 5) return compose_uniform(build_1d_multi_n5(T / M), M, T);
    if (d == 2 && p.order == 3) return compose_uniform(build_2d_multi_n3(T / M, model.correlation()(0, 1)), M, T);
    throw ValidationError("no closed-form multi-period measure for this model and order; pass --measure");
  }
  if (d == 1 && p.order == 3) {
    segments = 2;
    return ComposedMeasure({build_1d_oneperiod_n3(H, T)});
  }
  SolverConfig cfg;
  cfg.threads = threads_flag;
  segments = 4;
  if (d == 1 && p.order == 5) {
    return ComposedMeasure({solve_moment_system(moment_targets_1d_n5_oneperiod(H, 1.0), {3, 4}, cfg).measure->moved(0.0, T)});
  }
  if (d == 2 && p.order == 5) {
    cfg.threshold = 1e-3;
    const double rho = model.correlation()(0, 1);
    return ComposedMeasure(
        {solve_moment_system(moment_targets_2d_n5_oneperiod(H, 1.0, rho, true), {5, 4}, cfg).measure->moved(0.0, T)});
  }
  throw ValidationError("no one-period construction for this model and order; pass --measure");
}

void report_hypotheses(const SVIEModel& model, int order) {
  for (const auto& w : validate_hypotheses(model, order).warnings) std::cerr << "warning: " << w << "\n";
}

void check_grid(const PriceOptions& p, int segments, bool multi) {
  const int blocks = (multi ? p.periods : 1) * segments;
  if (p.steps % blocks != 0) {
    std::cerr << "warning: D=" << p.steps << " is not a multiple of M*L=" << blocks
              << "; path kinks fall between grid nodes\n";
  }
}

void emit_price(const PriceResult& r, const std::string& csv) {
  std::cout << std::setprecision(10) << r.method << " " << r.value;
  if (r.samples > 0) std::cout << " (std error " << std::setprecision(3) << r.std_error << ", " << r.samples << " paths)";
  if (r.atoms > 0) std::cout << " (" << r.atoms << " atoms, D=" << r.steps << ")";
  std::cout << "\n";
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
  if (!csv.empty()) {
    std::ofstream out(csv);
    write_price_csv(out, {r});
  }
}

PriceResult run_price(const SVIEModel& model, const Payoff& g, const PriceOptions& p) {
  const SolveGrid grid{p.steps, p.horizon};
  if (p.method == "oracle") {
    if (model.label != "linear") throw ValidationError("the oracle applies to the linear model only (--preset linear)");
    return gaussian_oracle(g, model.x0()[0], model_hurst(model, 1.5), p.horizon);
  }
  if (p.method == "euler") {
    EulerConfig cfg;
    cfg.samples = p.samples;
    cfg.seed = p.seed;
    cfg.threads = threads_flag;
    return euler_price(model, g, grid, cfg);
  }
  const bool multi = p.method == "cub-multi";
  int segments = 1;
  const ComposedMeasure measure = cubature_for(model, p, multi, segments);
  check_grid(p, segments, multi);
  report_hypotheses(model, p.order);
  PriceResult r = cubature_price(model, g, measure, grid, threads_flag);
  r.order = p.order;
  return r;
}

std::map<std::string, double> system_params(double H, double T, double rho, double delta) {
  return {{"H", H}, {"T", T}, {"rho", rho}, {"delta", delta}, {"homogeneous", 1.0}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"svcub: cubature pricing for stochastic Volterra integral equations"};
  app.require_subcommand(1);
  app.add_option("--threads", threads_flag, "worker threads (default: SVCUB_THREADS or hardware)");

  // cubature build / verify
  auto* cub = app.add_subcommand("cubature", "construct, solve or verify cubature measures");
  cub->require_subcommand(1);
  auto* build = cub->add_subcommand("build", "construct or solve a one-period measure and write JSON");
  std::string dim = "1d", out;
  int order = 3, W = 0, L = 4, restarts = 64, periods = 1;
  bool multi = false, oneperiod = false;
  double delta = 1.0, H = 1.5, T = 1.0, rho = 0.5, threshold = 0.0;
  std::optional<double> theta1, lambda1;
  std::uint64_t solver_seed = SolverConfig{}.seed;
  build->add_option("--model", dim, "1d | 2d")->check(CLI::IsMember({"1d", "2d"}));
  build->add_option("--order", order, "3 | 5")->check(CLI::IsMember({3, 5}));
  build->add_flag("--multi", multi, "multi-period construction (per-period length --delta)");
  build->add_flag("--oneperiod", oneperiod, "one-period construction on [0, T]");
  build->add_option("--delta", delta, "period length")->check(CLI::PositiveNumber);
  build->add_option("--H", H, "Hurst parameter");
  build->add_option("--T", T, "horizon of the one-period construction")->check(CLI::PositiveNumber);
  build->add_option("--rho", rho, "driver correlation (2d)");
  build->add_option("--theta1", theta1, "rotation angle of the 2d N=3 measure");
  build->add_option("--lambda1", lambda1, "family parameter of the 1d N=5 multi-period measure");
  build->add_option("--W", W, "half paths for solved systems");
  build->add_option("--L", L, "segments for solved systems");
  build->add_option("--seed", solver_seed, "solver seed");
  build->add_option("--restarts", restarts, "solver restarts")->check(CLI::PositiveNumber);
  build->add_option("--threshold", threshold, "solver acceptance on the max relative residual");
  build->add_option("--periods", periods, "period count stored with the measure")->check(CLI::PositiveNumber);
  build->add_option("--out", out, "output JSON (stdout when omitted)");

  auto* verify = cub->add_subcommand("verify", "per-equation residuals of a measure against its moment system");
  std::string measure_path, system_name, residual_csv;
  std::optional<double> tolerance;
  verify->add_option("--measure", measure_path, "measure JSON")->required();
  verify->add_option("--system", system_name, "system name (defaults to the one stored in the measure)");
  verify->add_option("--H", H, "Hurst parameter");
  verify->add_option("--rho", rho, "driver correlation");
  verify->add_option("--csv", residual_csv, "residual CSV output");
  verify->add_option("--tolerance", tolerance, "exit 3 when the max relative residual exceeds this");

  // price / compare
  ModelOptions mopt;
  PriceOptions popt;
  auto* price = app.add_subcommand("price", "price one payoff");
  mopt.add(price);
  popt.add(price, true);

  ModelOptions copt;
  PriceOptions cpopt;
  cpopt.method = "cub-multi";
  int repeats = 1000;
  std::string truth = "pooled", compare_csv;
  auto* cmp = app.add_subcommand("compare", "cubature vs repeated Euler runs with percentile statistics");
  copt.add(cmp);
  cpopt.add(cmp, false);
  cmp->add_option("--cubature", cpopt.method, "cub-oneperiod | cub-multi")
      ->check(CLI::IsMember({"cub-oneperiod", "cub-multi"}));
  cmp->add_option("--repeats", repeats, "Euler repeats R")->check(CLI::Range(2, 1000000));
  cmp->add_option("--truth", truth, "analytic (linear model) | pooled")->check(CLI::IsMember({"analytic", "pooled"}));
  cmp->add_option("--errors-csv", compare_csv, "per-repeat Euler values and errors");

  // repro
  auto* repro = app.add_subcommand("repro", "regenerate a results table (table1 .. table8)");
  std::string table_name, table_csv;
  ReproOptions ropt;
  repro->add_option("table", table_name, "table1 .. table8")->required();
  repro->add_option("--csv", table_csv, "CSV output");
  repro->add_option("--repeats", ropt.repeats, "override Euler repeats");
  repro->add_option("--samples", ropt.samples, "override Euler paths per repeat");
  repro->add_option("--seed", ropt.seed, "Euler seed");

  // moments dump
  auto* moments = app.add_subcommand("moments", "moment systems");
  moments->require_subcommand(1);
  auto* dump = moments->add_subcommand("dump", "write a moment system with its Wiener expectations as JSON");
  std::string dump_name = "1d-n5-oneperiod", dump_out;
  dump->add_option("--system", dump_name,
                   "1d-n3-oneperiod | 1d-n5-oneperiod | 1d-n3-multi | 1d-n5-multi | 2d-n3-multi | 2d-n5-oneperiod");
  dump->add_option("--H", H, "Hurst parameter");
  dump->add_option("--T", T, "horizon");
  dump->add_option("--rho", rho, "driver correlation");
  dump->add_option("--delta", delta, "period length (multi-period systems)");
  dump->add_option("--out", dump_out, "output JSON (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }
  ropt.threads = threads_flag;

  try {
    if (*build) {
      if (multi && oneperiod) throw ValidationError("--multi and --oneperiod are exclusive");
      CubatureMeasure m = [&]() -> CubatureMeasure {
        if (!oneperiod) {
          if (dim == "1d" && order == 3) return build_1d_multi_n3(delta);
          if (dim == "1d" && order == 5) return lambda1 ? build_1d_multi_n5(delta, *lambda1) : build_1d_multi_n5(delta);
          if (dim == "2d" && order == 3) return build_2d_multi_n3(delta, rho, theta1);
          throw ValidationError("no multi-period construction for 2d order 5; use --oneperiod");
        }
        if (dim == "1d" && order == 3) return build_1d_oneperiod_n3(H, T);
        SolverConfig cfg;
        cfg.restarts = restarts;
        cfg.seed = solver_seed;
        cfg.threads = threads_flag;
        const bool two = dim == "2d";
        cfg.threshold = threshold > 0.0 ? threshold : (two ? 1e-3 : 1e-6);
        const MomentSystem sys =
            two ? moment_targets_2d_n5_oneperiod(H, T, rho, true) : moment_targets_1d_n5_oneperiod(H, T);
        if (two && order == 3) throw ValidationError("2d order 3 is provided as --multi");
        const PathLayout layout{W > 0 ? W : (two ? 5 : 3), L};
        const SolveReport rep = solve_moment_system(sys, layout, cfg);
        std::cerr << "solved " << sys.name << ": max relative residual " << rep.max_relative << " (" << rep.accepted
                  << "/" << rep.restarts_run << " restarts accepted)\n";
        return *rep.measure;
      }();
      const std::string sys_name =
          (dim == "1d" ? "1d-n" : "2d-n") + std::to_string(order) + (oneperiod ? "-oneperiod" : "-multi");
      MomentSystem sys = build_moment_system(sys_name, system_params(H, oneperiod ? T : delta, rho, delta));
      const json j = measure_to_json(m, &sys, periods);
      if (out.empty()) {
        std::cout << std::setw(2) << j << "\n";
      } else {
        write_json_file(out, j);
      }
      return 0;
    }
    if (*verify) {
      const json j = read_json_file(measure_path);
      const CubatureMeasure m = measure_from_json(j);
      std::map<std::string, double> params;
      std::string name = system_name;
      if (j.contains("system")) {
        if (name.empty()) name = j["system"].at("name").get<std::string>();
        params = j["system"].at("params").get<std::map<std::string, double>>();
      }
      if (name.empty()) throw ValidationError("the measure has no stored system; pass --system");
      if (verify->count("--H")) params["H"] = H;
      if (verify->count("--rho")) params["rho"] = rho;
      params["T"] = m.horizon();
      params["delta"] = m.horizon();
      params["start"] = m.start();
      const MomentSystem sys = build_moment_system(name, params);
      const auto rows = verify_measure(sys, m);
      if (residual_csv.empty()) {
        write_residuals_csv(std::cout, rows);
      } else {
        std::ofstream f(residual_csv);
        write_residuals_csv(f, rows);
      }
      const double worst = max_relative_residual(rows);
      std::cerr << "max relative residual " << worst << " over " << rows.size() << " equations\n";
      return tolerance && worst > *tolerance ? kExitSolver : 0;
    }
    if (*price) {
      const SVIEModel model = mopt.model();
      const Payoff g = parse_payoff(mopt.payoff);
      emit_price(run_price(model, g, popt), popt.csv);
      return 0;
    }
    if (*cmp) {
      const SVIEModel model = copt.model();
      const Payoff g = parse_payoff(copt.payoff);
      const PriceResult c = run_price(model, g, cpopt);
      CompareConfig cfg;
      cfg.repeats = repeats;
      cfg.euler.samples = cpopt.samples;
      cfg.euler.seed = cpopt.seed;
      cfg.euler.threads = threads_flag;
      if (truth == "analytic") {
        if (model.label != "linear") throw ValidationError("--truth analytic requires the linear model");
        cfg.truth = TruthSource::analytic;
        cfg.analytic_truth = gaussian_oracle(g, model.x0()[0], model_hurst(model, 1.5), cpopt.horizon).value;
      }
      const ComparisonReport r = compare(model, g, c.value, SolveGrid{cpopt.steps, cpopt.horizon}, cfg);
      std::cout << std::setprecision(8) << "Y_true " << r.truth << " (std error " << r.truth_std_error << ")\n"
                << "Y_cub " << r.cubature << "\ne_cub " << r.e_cub << "\ne_Euler_mean " << r.e_mean << "\nSD_Euler "
                << r.sd << "\npercentile " << r.percentile << "\nempirical_rank " << r.empirical_percentile << "\n";
      if (r.degenerate) std::cerr << "warning: Euler errors have zero spread; percentile is degenerate\n";
      if (!compare_csv.empty()) {
        std::ofstream f(compare_csv);
        write_comparison_csv(f, r);
      }
      return 0;
    }
    if (*repro) {
      if (table_name.rfind("table", 0) != 0 || table_name.size() != 6) {
        throw ValidationError("expected table1 .. table8, got '" + table_name + "'");
      }
      const int k = table_name[5] - '0';
      if (k < 1 || k > 8) throw ValidationError("expected table1 .. table8, got '" + table_name + "'");
      const ReproTable t = repro_table(k, ropt);
      print_table(std::cout, t);
      if (!table_csv.empty()) {
        std::ofstream f(table_csv);
        write_table_csv(f, t);
      }
      return t.pass() ? 0 : kExitTolerance;
    }
    if (*dump) {
      const MomentSystem sys = build_moment_system(dump_name, system_params(H, T, rho, delta));
      const json j = moment_system_to_json(sys);
      if (dump_out.empty()) {
        std::cout << std::setw(2) << j << "\n";
      } else {
        write_json_file(dump_out, j);
      }
      return 0;
    }
  } catch (const SolverFailure& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error at step " << e.step() << ", coordinate " << e.coordinate() << ": " << e.what()
              << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
