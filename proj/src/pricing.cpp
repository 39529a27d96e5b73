#include "svcub/pricing.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "svcub/parallel.hpp"
#include "svcub/quadrature.hpp"

namespace svcub {
namespace {

constexpr std::size_t kChunk = 1024;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t repeat, std::uint64_t chunk) {
  return splitmix64(splitmix64(splitmix64(seed) ^ (repeat + 0x632be59bd9b4e019ULL)) ^ (chunk + 1));
}

struct Neumaier {
  double sum = 0.0, comp = 0.0;
  void add(double x) {
    const double t = sum + x;
    comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

PriceResult cubature_price(const SVIEModel& model, const Payoff& payoff, const ComposedMeasure& measure,
                           const SolveGrid& grid, int threads) {
  const auto t0 = std::chrono::steady_clock::now();
  grid.validate();
  const double tol = 1e-9 * std::max(1.0, grid.horizon);
  if (std::abs(measure.start()) > tol || std::abs(measure.end() - grid.horizon) > tol) {
    throw std::invalid_argument("measure horizon does not match the model horizon");
  }
  if (measure.drivers() != model.drivers()) throw std::invalid_argument("measure and model driver counts differ");
  const std::size_t n = measure.atom_count();
  std::vector<double> contributions(n);
  VolterraSolver solver(model, grid);
  parallel_for(n, threads, [&](std::size_t i) {
    const auto x = solver.solve(midpoint_increments(measure.path(i), grid));
    contributions[i] = measure.weight(i) * payoff(x);
  });
  Neumaier sum;
  for (double c : contributions) sum.add(c);
  PriceResult r;
  r.value = sum.value();
  r.method = "cubature";
  r.atoms = n;
  r.steps = grid.steps;
  r.periods = measure.periods();
  r.seconds = seconds_since(t0);
  if (!payoff.smooth) r.warnings.push_back(payoff.warning());
  return r;
}

PriceResult gaussian_oracle(const Payoff& payoff, double x0, double hurst, double horizon) {
  const auto t0 = std::chrono::steady_clock::now();
  if (!(hurst > 0.5)) throw std::invalid_argument("oracle requires H > 1/2");
  const double sigma = std::sqrt(std::pow(horizon, 2.0 * hurst) / (2.0 * hurst));
  auto f = [&](double z) { return payoff.at(x0 + sigma * z) * std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); };
  double value = 0.0;
  if (payoff.kink && sigma > 0.0) {
    const double zk = std::clamp((*payoff.kink - x0) / sigma, -12.0, 12.0);
    value = integrate_adaptive(f, -12.0, zk, 1e-13) + integrate_adaptive(f, zk, 12.0, 1e-13);
  } else {
    value = integrate_adaptive(f, -12.0, 12.0, 1e-13);
  }
  PriceResult r;
  r.value = value;
  r.method = "oracle";
  r.seconds = seconds_since(t0);
  return r;
}

EulerMoments euler_moments(const SVIEModel& model, const Payoff& payoff, const SolveGrid& grid,
                           const EulerConfig& cfg) {
  grid.validate();
  if (cfg.samples < 1) throw std::invalid_argument("Euler needs at least one sample");
  const int D = grid.steps;
  const int d = model.drivers();
  const double sqrt_h = std::sqrt(grid.step());
  const Eigen::MatrixXd& A = model.correlation_factor();
  VolterraSolver solver(model, grid);
  const std::size_t samples = cfg.noise ? cfg.samples : 1;
  const std::size_t chunks = (samples + kChunk - 1) / kChunk;
  std::vector<double> sums(chunks), squares(chunks);
  parallel_for(chunks, cfg.threads, [&](std::size_t c) {
    std::mt19937_64 rng(stream_seed(cfg.seed, cfg.repeat, c));
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd inc(D, d + 1);
    inc.col(0).setConstant(grid.step());
    Eigen::VectorXd z(d);
    Neumaier s, q;
    const std::size_t begin = c * kChunk, end = std::min(samples, begin + kChunk);
    for (std::size_t k = begin; k < end; ++k) {
      for (int a = 0; a < D; ++a) {
        if (cfg.noise) {
          for (int j = 0; j < d; ++j) z(j) = normal(rng);
          inc.block(a, 1, 1, d) = (sqrt_h * (A * z)).transpose();
        } else {
          inc.block(a, 1, 1, d).setZero();
        }
      }
      const double g = payoff(solver.solve(inc, nullptr, true));
      s.add(g);
      q.add(g * g);
    }
    sums[c] = s.value();
    squares[c] = q.value();
  });
  Neumaier s, q;
  for (std::size_t c = 0; c < chunks; ++c) {
    s.add(sums[c]);
    q.add(squares[c]);
  }
  return {s.value() / samples, q.value() / samples, samples};
}

PriceResult euler_price(const SVIEModel& model, const Payoff& payoff, const SolveGrid& grid, const EulerConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const EulerMoments m = euler_moments(model, payoff, grid, cfg);
  PriceResult r;
  r.value = m.mean;
  r.method = "euler";
  r.steps = grid.steps;
  r.seed = cfg.seed;
  r.samples = m.samples;
  const double var = std::max(0.0, m.mean_square - m.mean * m.mean);
  r.std_error = m.samples > 1 ? std::sqrt(var / (m.samples - 1)) : 0.0;
  r.seconds = seconds_since(t0);
  if (!payoff.smooth) r.warnings.push_back(payoff.warning());
  return r;
}

ComparisonReport compare(const SVIEModel& model, const Payoff& payoff, double cubature_value, const SolveGrid& grid,
                         const CompareConfig& cfg) {
  if (cfg.repeats < 2) throw std::invalid_argument("comparison needs at least two Euler repeats");
  std::vector<EulerMoments> runs(cfg.repeats);
  EulerConfig inner = cfg.euler;
  inner.threads = 1;
  parallel_for(static_cast<std::size_t>(cfg.repeats), cfg.euler.threads, [&](std::size_t r) {
    EulerConfig c = inner;
    c.repeat = r;
    runs[r] = euler_moments(model, payoff, grid, c);
  });
  ComparisonReport rep;
  rep.cubature = cubature_value;
  Neumaier mean, square;
  for (const auto& m : runs) {
    rep.euler_values.push_back(m.mean);
    mean.add(m.mean);
    square.add(m.mean_square);
  }
  const double n_total = static_cast<double>(cfg.repeats) * static_cast<double>(runs.front().samples);
  if (cfg.truth == TruthSource::analytic) {
    rep.truth = cfg.analytic_truth;
  } else {
    rep.truth = mean.value() / cfg.repeats;
    const double var = std::max(0.0, square.value() / cfg.repeats - rep.truth * rep.truth);
    rep.truth_std_error = std::sqrt(var / n_total);
  }
  rep.e_cub = std::abs(cubature_value - rep.truth);
  Neumaier e_sum;
  for (double y : rep.euler_values) {
    rep.euler_errors.push_back(std::abs(y - rep.truth));
    e_sum.add(rep.euler_errors.back());
  }
  rep.e_mean = e_sum.value() / cfg.repeats;
  Neumaier dev;
  for (double e : rep.euler_errors) dev.add((e - rep.e_mean) * (e - rep.e_mean));
  rep.sd = std::sqrt(dev.value() / (cfg.repeats - 1));
  double below = 0.0;
  for (double e : rep.euler_errors) below += e < rep.e_cub ? 1.0 : (e == rep.e_cub ? 0.5 : 0.0);
  rep.empirical_percentile = below / cfg.repeats;
  if (rep.sd > 0.0) {
    rep.percentile = normal_cdf((rep.e_cub - rep.e_mean) / rep.sd);
  } else {
    rep.degenerate = true;
    rep.percentile = rep.e_cub > rep.e_mean ? 1.0 : 0.0;
  }
  return rep;
}

}  // namespace svcub
