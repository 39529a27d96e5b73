#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "svcub/cubature.hpp"

namespace svcub {

// One tolerance check against a printed reference value.
struct ReproCheck {
  std::string label;
  double value = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;
  bool upper_bound = false;  // pass iff value <= reference (tolerance unused)
  bool pass = false;
};

struct ReproRow {
  std::string label;
  std::vector<double> values;
};

struct ReproTable {
  std::string id;
  std::string title;
  std::vector<std::string> columns;
  std::vector<ReproRow> rows;
  std::vector<ReproCheck> checks;
  std::vector<std::string> notes;
  double seconds = 0.0;
  bool pass() const;
};

struct ReproOptions {
  int threads = 0;
  std::uint64_t seed = 20240601;
  int repeats = 0;           // Euler repeats R; 0 keeps the table's protocol
  std::size_t samples = 0;   // Euler paths per repeat; 0 keeps the table's protocol
  std::vector<std::size_t> table3_samples = {100, 500, 1000};
};

ReproCheck make_check(const std::string& label, double value, double reference, double tolerance);
ReproCheck make_bound(const std::string& label, double value, double bound);

// Tables 1-8 (1: T=3 one/multi-period N=3; 2: N=3 vs N=5; 3: one-period N=5 vs Euler;
// 4: solved measures; 5/6: fractional volatility one-period N=5; 7: cos model M=5;
// 8: fractional volatility M=3 across H).
ReproTable repro_table(int table, const ReproOptions& options = {});

// Deterministic solved measures on [0, 1] (cached per process).
const CubatureMeasure& solved_1d_n5_measure(int threads = 0);
const CubatureMeasure& solved_2d_n5_measure(int threads = 0);

void print_table(std::ostream& os, const ReproTable& table);
void write_table_csv(std::ostream& os, const ReproTable& table);

}  // namespace svcub
