// Acceptance harness: one PASS/FAIL line per criterion. Arguments select criteria (AC1..AC9);
// no argument runs all of them.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "svcub/cubature.hpp"
#include "svcub/moment_systems.hpp"
#include "svcub/pricing.hpp"
#include "svcub/repro.hpp"

using namespace svcub;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;

  void check(bool ok, const std::string& what) {
    if (!ok) pass = false;
    details.push_back(std::string(ok ? "  ok   " : "  MISS ") + what);
  }
  void note(const std::string& what) { details.push_back("  note " + what); }
};

std::string num(double v, int prec = 8) {
  std::ostringstream os;
  os << std::setprecision(prec) << v;
  return os.str();
}

void absorb(Outcome& out, const ReproTable& t) {
  for (const auto& c : t.checks) {
    std::ostringstream os;
    os << t.id << " " << c.label << ": " << num(c.value);
    if (c.upper_bound) {
      os << " <= " << num(c.reference);
    } else {
      os << " vs " << num(c.reference) << " (tol " << num(c.tolerance, 3) << ")";
    }
    out.check(c.pass, os.str());
  }
  for (const auto& n : t.notes) out.note(t.id + ": " + n);
}

double expect(const IteratedIntegralSpec& s, const std::vector<Kernel>& k, const Eigen::MatrixXd& corr) {
  return wiener_expectation(s, k, corr).value;
}

void relative(Outcome& out, const std::string& label, double got, double want, double tol) {
  const double err = want == 0.0 ? std::abs(got) : std::abs(got - want) / std::abs(want);
  out.check(err <= tol, label + ": " + num(got, 12) + " vs " + num(want, 12) + " (err " + num(err, 2) + ")");
}

Outcome ac1() {
  Outcome out;
  for (const auto& [H, T] : std::vector<std::pair<double, double>>{{1.5, 1.0}, {2.5, 3.0}, {1.5, 0.3}}) {
    const std::vector<Kernel> k{Kernel::power_law(H)};
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(1, 1);
    const std::string tag = " H=" + num(H, 3) + " T=" + num(T, 3);
    relative(out, "EQK1 K(0,0)" + tag, expect(oracle::anchored_spec({0, 0}, T), k, I), std::pow(T, 2 * H) / (4 * H), 1e-9);
    relative(out, "EQK1 K(0,1)" + tag, expect(oracle::anchored_spec({0, 1}, T), k, I), 0.0, 1e-12);
    for (const auto& [alpha, members] : oracle::s4_groups()) {
      double sum = 0.0;
      for (const auto& a : members) sum += expect(oracle::anchored_spec(a, T), k, I);
      relative(out, "EQK2 phi" + std::to_string(alpha) + tag, sum, oracle::s4_closed_form(alpha, H, T), 1e-9);
    }
  }
  const double H = 1.5, rho = 0.5;
  for (const double T : {1.0, 0.1}) {
    const MomentSystem sys = moment_targets_2d_n5_oneperiod(H, T, rho, true);
    int n = 0, bad = 0;
    double worst = 0.0;
    for (const auto& c : sys.conditions) {
      const auto e = oracle::two_d_expectation(c.label, H, T, rho);
      if (!e) continue;
      const double got = condition_expectation(c, sys);
      const double err = *e == 0.0 ? std::abs(got) : std::abs(got - *e) / std::abs(*e);
      worst = std::max(worst, err);
      bad += err > 1e-9;
      ++n;
    }
    out.check(bad == 0 && n == 42, "2-D expectation table T=" + num(T, 3) + ": " + std::to_string(n) +
                                       " entries, worst error " + num(worst, 2));
  }
  return out;
}

Outcome ac2() {
  Outcome out;
  const double H = 1.5, T = 1.0, hp = H + 0.5, hm = H - 0.5;
  const SVIEModel m = linear_model(H, 0.0);
  const SolveGrid grid{1000, T};
  const double one = cubature_price(m, payoff_square(), ComposedMeasure({build_1d_oneperiod_n3(H, T)}), grid).value;
  const double mul = cubature_price(m, payoff_square(), compose_uniform(build_1d_multi_n3(T), 1, T), grid).value;
  const double y_true = std::pow(T, 2 * H) / (2 * H);
  const double y_mul = std::pow(T, 2 * H) / (hp * hp);
  out.check(std::abs(one - y_true) <= 1e-6, "one-period N=3: " + num(one, 12) + " vs " + num(y_true, 12));
  out.check(std::abs(mul - y_mul) <= 1e-6, "multi M=1 N=3: " + num(mul, 12) + " vs " + num(y_mul, 12));
  const double gap = hm * hm / (2 * H * hp * hp) * std::pow(T, 2 * H);
  out.check(std::abs((one - mul) - gap) <= 1e-6, "gap: " + num(one - mul, 12) + " vs " + num(gap, 12));
  return out;
}

Outcome table_outcome(std::initializer_list<int> tables) {
  Outcome out;
  for (int k : tables) absorb(out, repro_table(k));
  return out;
}

Outcome ac5() {
  Outcome out;
  const double H = 1.5, T = 1.0;
  const SVIEModel m = cos_model(H, 1.0);
  const SolveGrid grid{600, T};
  auto y = [&](int M) {
    return cubature_price(m, payoff_cos(), compose_uniform(build_1d_multi_n3(T / M), M, T), grid).value;
  };
  // Richardson extrapolation assuming an O(1/M) leading error, from M = 8 and M = 12.
  const double y8 = y(8), y12 = y(12);
  const double ref = (12 * y12 - 8 * y8) / 4;
  out.note("reference (Richardson M=8,12) = " + num(ref, 12));
  std::vector<double> lx, ly;
  for (int M = 2; M <= 6; ++M) {
    const double e = std::abs(y(M) - ref);
    out.note("M=" + std::to_string(M) + " |Y - ref| = " + num(e, 6));
    lx.push_back(std::log(M));
    ly.push_back(std::log(e));
  }
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / lx.size();
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / ly.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  const double slope = sxy / sxx;
  out.check(slope <= -0.8, "least-squares slope " + num(slope, 4) + " <= -0.8");
  return out;
}

Outcome ac6() {
  Outcome out;
  auto worst_abs = [](const std::vector<ResidualRow>& rows) {
    double w = 0.0;
    for (const auto& r : rows) w = std::max(w, std::abs(r.residual));
    return w;
  };
  const double r5 = worst_abs(verify_measure(moment_targets_1d_n5_multi(0.1), build_1d_multi_n5(0.1)));
  out.check(r5 <= 1e-12, "multi-period N=5 (1/6, 2/3, 1/6) measure: max residual " + num(r5, 3));
  double r3 = 0.0;
  for (const double H : {1.5, 2.5}) {
    for (const double T : {1.0, 3.0, 0.3}) {
      r3 = std::max(r3, max_relative_residual(verify_measure(moment_targets_1d_n3_oneperiod(H, T),
                                                             build_1d_oneperiod_n3(H, T))));
    }
  }
  out.check(r3 <= 1e-9, "one-period N=3 closed-form measure: max relative residual " + num(r3, 3));
  const double r2 = worst_abs(verify_measure(moment_targets_2d_n3_multi(0.2, 0.5),
                                             build_2d_multi_n3(0.2, 0.5, std::numbers::pi / 6)));
  out.check(r2 <= 1e-12, "2-D N=3 measure (rho=1/2, theta1=pi/6): max residual " + num(r2, 3));
  return out;
}

Outcome ac8() {
  Outcome out;
  const ReproTable t = repro_table(3);
  absorb(out, t);
  const std::vector<double>* pct = nullptr;
  const std::vector<double>* emp = nullptr;
  for (const auto& r : t.rows) {
    if (r.label == "percentile") pct = &r.values;
    if (r.label == "empirical_rank") emp = &r.values;
  }
  if (!pct || !emp) {
    out.check(false, "percentile rows missing");
    return out;
  }
  for (std::size_t i = 0; i < pct->size(); ++i) {
    const double d = std::abs((*pct)[i] - (*emp)[i]);
    out.check(d <= 0.05, t.columns[i] + ": normal percentile " + num((*pct)[i], 4) + " vs empirical rank " +
                             num((*emp)[i], 4) + " (|diff| " + num(d, 3) + " <= 0.05)");
  }
  return out;
}

struct Criterion {
  std::string id;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {"AC1", 10, ac1},
      {"AC2", 5, ac2},
      {"AC3", 60, [] { return table_outcome({1}); }},
      {"AC4", 30, [] { return table_outcome({2}); }},
      {"AC5", 600, ac5},
      {"AC6", 5, ac6},
      {"AC7", 900, [] { return table_outcome({4}); }},
      {"AC8", 600, ac8},
      {"AC9", 1200, [] { return table_outcome({5, 6, 7, 8}); }},
  };
  std::vector<std::string> selected(argv + 1, argv + argc);
  bool verbose = false;
  std::erase_if(selected, [&](const std::string& a) { return a == "-v" ? (verbose = true) : false; });
  int failures = 0;
  std::vector<std::string> summary;
  for (const auto& c : all) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.check(secs < c.limit_seconds, "runtime " + num(secs, 3) + " s < " + num(c.limit_seconds, 4) + " s");
    const std::string line = c.id + " " + (out.pass ? "PASS" : "FAIL") + " (" + num(secs, 3) + " s)";
    summary.push_back(line);
    std::cout << line << "\n";
    for (const auto& d : out.details) {
      if (verbose || !out.pass || d.rfind("  MISS", 0) == 0) std::cout << d << "\n";
    }
    std::cout.flush();
    failures += !out.pass;
  }
  if (summary.size() > 1) {
    std::cout << "\nsummary\n";
    for (const auto& s : summary) std::cout << s << "\n";
  }
  return failures == 0 ? 0 : 1;
}
