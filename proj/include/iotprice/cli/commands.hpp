#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "iotprice/cli/config.hpp"
#include "iotprice/cli/serialize.hpp"

namespace iotprice::cli {

inline constexpr const char kToolVersion[] = "0.1.0";

enum ExitStatus : int {
  kExitOk = 0,
  kExitVerificationFailed = 1,
  kExitConfigError = 2,
  kExitIoError = 3,
};

// A price shift injected before verification, e.g. "w:+0.5".
struct Perturbation {
  enum class Var { kPi, kW, kC } var = Var::kW;
  double delta = 0.0;

  static Perturbation parse(const std::string& text);
  StrategyProfile apply(StrategyProfile profile) const;
};

// Ad state of one sweep point. For var == "ba1" the point is the revenue,
// split as b = ba1 / a1 with the configured a1, or as a1 = ba1 / b when the
// config fixes b. For var == "b" a1 comes from the pool when present, else
// from the config.
AdState sweep_point_state(const ScenarioConfig& config, double point,
                          const std::optional<AdvertiserPool>& pool);

// Sweep rows ordered by model (config order) then ascending sweep value.
std::vector<SweepRow> run_sweep(const ScenarioConfig& config,
                                const std::optional<AdvertiserPool>& pool);

struct VerifyPoint {
  Model model = Model::kPush;
  double ba1 = 0.0;
  VerificationReport report;
};

std::vector<VerifyPoint> run_verify(
    const ScenarioConfig& config, const std::optional<AdvertiserPool>& pool,
    const std::optional<Perturbation>& perturb);

// Figure presets fig2..fig8 (demand-compare is fig5). Pins d = 1 and
// d_max = 15 and returns the named series over the config's sweep.
struct FigureData {
  std::string name;
  std::vector<double> ba1;
  std::vector<std::pair<std::string, std::vector<double>>> series;
};

FigureData run_figure(const std::string& name, ScenarioConfig config);
void write_figure_csv(std::ostream& out, const FigureData& fig,
                      const std::string& config_hash);
nlohmann::json to_json(const FigureData& fig);

// CLI entry point; returns the process exit status.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace iotprice::cli
