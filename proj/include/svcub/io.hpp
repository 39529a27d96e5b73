#pragma once

#include <iosfwd>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "svcub/cubature.hpp"
#include "svcub/model.hpp"
#include "svcub/moment_systems.hpp"
#include "svcub/pricing.hpp"
#include "svcub/volterra.hpp"

namespace svcub {

using json = nlohmann::json;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Measures: {"format": "svcub-measure", "start", "horizon", "periods", "atoms": [{"weight", "slopes"}]}.
json measure_to_json(const CubatureMeasure& measure, const MomentSystem* system = nullptr, int periods = 1);
CubatureMeasure measure_from_json(const json& j);
void save_measure(const std::string& path, const CubatureMeasure& measure, const MomentSystem* system = nullptr,
                  int periods = 1);
CubatureMeasure load_measure(const std::string& path);
// Period count stored alongside the measure (1 when absent).
int stored_periods(const json& j);

// Models: {"preset": "linear" | "cos" | "heston", ...} or the general form with
// "drivers", "states": [{"name", "kernel", "x0", "coefficients"}], "correlation".
SVIEModel model_from_json(const json& j);
json model_to_json(const SVIEModel& model);
SVIEModel load_model(const std::string& path);

json moment_system_to_json(const MomentSystem& system, bool with_expectations = true);

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

void write_residuals_csv(std::ostream& os, const std::vector<ResidualRow>& rows);
// Samples every atom path of a one-period measure at `samples + 1` equally spaced times.
void write_paths_csv(std::ostream& os, const CubatureMeasure& measure, int samples = 64);
void write_trajectory_csv(std::ostream& os, const Trajectory& trajectory, const std::vector<std::string>& names);
void write_price_csv(std::ostream& os, const std::vector<PriceResult>& results, bool header = true);
void write_comparison_csv(std::ostream& os, const ComparisonReport& report);

}  // namespace svcub
