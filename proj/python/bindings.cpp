#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "svcub/cubature.hpp"
#include "svcub/io.hpp"
#include "svcub/moment_systems.hpp"
#include "svcub/pricing.hpp"
#include "svcub/repro.hpp"
#include "svcub/solver.hpp"

namespace py = pybind11;
using namespace svcub;

namespace {

SVIEModel model_from_string(const std::string& text) { return model_from_json(json::parse(text)); }

}  // namespace

PYBIND11_MODULE(_svcub, m) {
  m.doc() = "Deterministic cubature pricing for stochastic Volterra integral equations";

  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<SolverFailure>(m, "SolverFailure", PyExc_RuntimeError);

  py::class_<Kernel>(m, "Kernel")
      .def_static("one", &Kernel::one)
      .def_static("power_law", &Kernel::power_law, py::arg("hurst"))
      .def_property_readonly("hurst", &Kernel::hurst)
      .def_property_readonly("is_constant", &Kernel::is_constant)
      .def("__call__", &Kernel::operator(), py::arg("t"), py::arg("r"))
      .def("__repr__", &Kernel::describe);

  py::class_<SVIEModel>(m, "Model")
      .def_property_readonly("drivers", &SVIEModel::drivers)
      .def_property_readonly("states", &SVIEModel::states)
      .def_property_readonly("x0", &SVIEModel::x0)
      .def_property_readonly("state_names", &SVIEModel::state_names)
      .def_property_readonly("correlation", &SVIEModel::correlation)
      .def("to_json", [](const SVIEModel& s) { return model_to_json(s).dump(); })
      .def_static("from_json", &model_from_string, py::arg("text"));

  py::class_<HestonSpec>(m, "HestonSpec")
      .def(py::init<>())
      .def_readwrite("hurst", &HestonSpec::hurst)
      .def_readwrite("rho", &HestonSpec::rho)
      .def_readwrite("s0", &HestonSpec::s0)
      .def_readwrite("u0", &HestonSpec::u0)
      .def_readwrite("b1", &HestonSpec::b1)
      .def_readwrite("sigma1", &HestonSpec::sigma1)
      .def_readwrite("sigma2", &HestonSpec::sigma2);

  m.def("linear_model", &linear_model, py::arg("hurst"), py::arg("x0"));
  m.def("cos_model", &cos_model, py::arg("hurst"), py::arg("x0"));
  m.def("heston_model", &heston_model, py::arg("spec"));

  py::class_<Payoff>(m, "Payoff")
      .def_readonly("name", &Payoff::name)
      .def_readonly("read_index", &Payoff::read_index)
      .def("__call__", &Payoff::at, py::arg("x"));
  m.def("payoff", &parse_payoff, py::arg("text"), py::arg("read_index") = 0);

  py::class_<SolveGrid>(m, "SolveGrid")
      .def(py::init([](int steps, double horizon) { return SolveGrid{steps, horizon}; }), py::arg("steps"),
           py::arg("horizon"))
      .def_readwrite("steps", &SolveGrid::steps)
      .def_readwrite("horizon", &SolveGrid::horizon);

  py::class_<CubatureMeasure>(m, "CubatureMeasure")
      .def_property_readonly("start", &CubatureMeasure::start)
      .def_property_readonly("horizon", &CubatureMeasure::horizon)
      .def_property_readonly("segments", &CubatureMeasure::segments)
      .def_property_readonly("drivers", &CubatureMeasure::drivers)
      .def_property_readonly("weights",
                             [](const CubatureMeasure& c) {
                               std::vector<double> w;
                               for (const auto& a : c.atoms()) w.push_back(a.weight);
                               return w;
                             })
      .def_property_readonly("slopes",
                             [](const CubatureMeasure& c) {
                               std::vector<Eigen::MatrixXd> s;
                               for (const auto& a : c.atoms()) s.push_back(a.slopes);
                               return s;
                             })
      .def("__len__", &CubatureMeasure::size)
      .def("weight_sum", &CubatureMeasure::weight_sum)
      .def("is_symmetric", &CubatureMeasure::is_symmetric, py::arg("tol") = 1e-12)
      .def("moved", &CubatureMeasure::moved, py::arg("start"), py::arg("horizon"))
      .def("to_json", [](const CubatureMeasure& c) { return measure_to_json(c).dump(); })
      .def_static("from_json", [](const std::string& text) { return measure_from_json(json::parse(text)); },
                  py::arg("text"));

  py::class_<ComposedMeasure>(m, "ComposedMeasure")
      .def_property_readonly("periods", &ComposedMeasure::periods)
      .def_property_readonly("atom_count", &ComposedMeasure::atom_count)
      .def("weight", &ComposedMeasure::weight, py::arg("index"))
      .def("digits", &ComposedMeasure::digits, py::arg("index"))
      .def("weight_sum", &ComposedMeasure::weight_sum);

  m.def("compose", &compose, py::arg("periods"));
  m.def("compose_uniform", &compose_uniform, py::arg("unit"), py::arg("periods"), py::arg("horizon"),
        py::arg("start") = 0.0);
  m.def("build_1d_multi_n3", &build_1d_multi_n3, py::arg("delta"), py::arg("start") = 0.0);
  m.def("build_1d_multi_n5", &build_1d_multi_n5, py::arg("delta"), py::arg("lambda1") = 1.0 / 6.0,
        py::arg("start") = 0.0);
  m.def("build_1d_oneperiod_n3", &build_1d_oneperiod_n3, py::arg("hurst"), py::arg("horizon"));
  m.def("build_2d_multi_n3", &build_2d_multi_n3, py::arg("delta"), py::arg("rho"),
        py::arg("theta1") = std::optional<double>{}, py::arg("start") = 0.0);

  py::class_<MomentSystem>(m, "MomentSystem")
      .def_readonly("name", &MomentSystem::name)
      .def_readonly("drivers", &MomentSystem::drivers)
      .def_readonly("horizon", &MomentSystem::horizon)
      .def("equation_count", &MomentSystem::equation_count)
      .def_property_readonly("labels",
                             [](const MomentSystem& s) {
                               std::vector<std::string> l;
                               for (const auto& c : s.conditions) l.push_back(c.label);
                               return l;
                             })
      .def_property_readonly("targets",
                             [](const MomentSystem& s) {
                               std::vector<double> t;
                               for (const auto& c : s.conditions) t.push_back(c.target);
                               return t;
                             })
      .def("to_json", [](const MomentSystem& s) { return moment_system_to_json(s).dump(); });
  m.def("moment_system", &build_moment_system, py::arg("name"), py::arg("params"));

  py::class_<ResidualRow>(m, "ResidualRow")
      .def_readonly("label", &ResidualRow::label)
      .def_readonly("lhs", &ResidualRow::lhs)
      .def_readonly("target", &ResidualRow::target)
      .def_readonly("residual", &ResidualRow::residual)
      .def_readonly("relative", &ResidualRow::relative);
  m.def("verify_measure", &verify_measure, py::arg("system"), py::arg("measure"));
  m.def("max_relative_residual", &max_relative_residual, py::arg("rows"));

  py::class_<SolverConfig>(m, "SolverConfig")
      .def(py::init<>())
      .def_readwrite("restarts", &SolverConfig::restarts)
      .def_readwrite("seed", &SolverConfig::seed)
      .def_readwrite("max_iterations", &SolverConfig::max_iterations)
      .def_readwrite("threshold", &SolverConfig::threshold)
      .def_readwrite("threads", &SolverConfig::threads);
  py::class_<SolveReport>(m, "SolveReport")
      .def_readonly("success", &SolveReport::success)
      .def_readonly("measure", &SolveReport::measure)
      .def_readonly("rows", &SolveReport::rows)
      .def_readonly("max_relative", &SolveReport::max_relative)
      .def_readonly("restarts_run", &SolveReport::restarts_run)
      .def_readonly("best_restart", &SolveReport::best_restart);
  m.def(
      "solve_moment_system",
      [](const MomentSystem& s, int paths, int segments, const SolverConfig& cfg) {
        py::gil_scoped_release release;
        return try_solve_moment_system(s, PathLayout{paths, segments}, cfg);
      },
      py::arg("system"), py::arg("paths"), py::arg("segments"), py::arg("config") = SolverConfig{});

  py::class_<PriceResult>(m, "PriceResult")
      .def_readonly("value", &PriceResult::value)
      .def_readonly("method", &PriceResult::method)
      .def_readonly("atoms", &PriceResult::atoms)
      .def_readonly("steps", &PriceResult::steps)
      .def_readonly("samples", &PriceResult::samples)
      .def_readonly("std_error", &PriceResult::std_error)
      .def_readonly("seconds", &PriceResult::seconds)
      .def_readonly("warnings", &PriceResult::warnings);
  m.def(
      "cubature_price",
      [](const SVIEModel& model, const Payoff& payoff, const ComposedMeasure& measure, const SolveGrid& grid,
         int threads) {
        py::gil_scoped_release release;
        return cubature_price(model, payoff, measure, grid, threads);
      },
      py::arg("model"), py::arg("payoff"), py::arg("measure"), py::arg("grid"), py::arg("threads") = 0);
  m.def("gaussian_oracle", &gaussian_oracle, py::arg("payoff"), py::arg("x0"), py::arg("hurst"), py::arg("horizon"));
  m.def(
      "euler_price",
      [](const SVIEModel& model, const Payoff& payoff, const SolveGrid& grid, std::size_t samples,
         std::uint64_t seed, std::uint64_t repeat, int threads) {
        py::gil_scoped_release release;
        EulerConfig cfg;
        cfg.samples = samples;
        cfg.seed = seed;
        cfg.repeat = repeat;
        cfg.threads = threads;
        return euler_price(model, payoff, grid, cfg);
      },
      py::arg("model"), py::arg("payoff"), py::arg("grid"), py::arg("samples") = 500, py::arg("seed") = 1,
      py::arg("repeat") = 0, py::arg("threads") = 0);

  m.def(
      "repro_table",
      [](int table, int repeats, std::size_t samples, int threads) {
        py::gil_scoped_release release;
        ReproOptions o;
        o.repeats = repeats;
        o.samples = samples;
        o.threads = threads;
        const ReproTable t = repro_table(table, o);
        std::ostringstream os;
        write_table_csv(os, t);
        return py::make_tuple(t.pass(), os.str());
      },
      py::arg("table"), py::arg("repeats") = 0, py::arg("samples") = 0, py::arg("threads") = 0,
      "Runs a reproduction table; returns (all checks pass, CSV text).");
}
