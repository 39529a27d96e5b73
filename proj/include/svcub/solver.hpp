#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "svcub/cubature.hpp"
#include "svcub/moment_systems.hpp"

namespace svcub {

// W half paths (each mirrored) with L segments; drivers come from the system.
struct PathLayout {
  int paths = 2;
  int segments = 4;
};

struct SolverConfig {
  std::vector<double> beta;  // per condition; empty means 1/target^2 (1 for zero targets)
  int restarts = 64;
  std::uint64_t seed = 20240601;
  int max_iterations = 3000;
  double gradient_tolerance = 1e-15;
  double threshold = 1e-6;   // acceptance on the max relative residual
  int threads = 0;
};

struct SolveReport {
  bool success = false;
  std::optional<CubatureMeasure> measure;
  std::vector<ResidualRow> rows;
  double max_relative = 0.0;
  int restarts_run = 0;
  int accepted = 0;      // restarts below threshold
  int best_restart = -1;
};

class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(const std::string& what, SolveReport report)
      : std::runtime_error(what), report_(std::move(report)) {}
  const SolveReport& report() const { return report_; }

 private:
  SolveReport report_;
};

// Multi-start Levenberg-Marquardt least squares on the symmetric-closure ansatz with
// weights >= 0 and the weight constraint 2 sum(lambda) = 1. Among accepted restarts the one
// with the smallest max |a| wins.
SolveReport try_solve_moment_system(const MomentSystem& system, PathLayout layout, const SolverConfig& cfg);
// As above; throws SolverFailure carrying the best residuals when nothing is accepted.
SolveReport solve_moment_system(const MomentSystem& system, PathLayout layout, const SolverConfig& cfg);

}  // namespace svcub
