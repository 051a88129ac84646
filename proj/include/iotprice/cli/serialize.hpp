#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "iotprice/ad_market.hpp"
#include "iotprice/compare.hpp"
#include "iotprice/model.hpp"
#include "iotprice/oracle.hpp"
#include "json.hpp"

namespace iotprice::cli {

struct SweepRow {
  Model model = Model::kPush;
  double ba1 = 0.0;
  EquilibriumOutcome eq;
};

// Fixed sweep CSV column order.
inline constexpr const char* kSweepColumns[] = {
    "model",     "ba1",         "regime",     "unique",      "p_i",
    "w_eff",     "c_eff",       "p_w_unit",   "p_c_unit",    "demand",
    "u_iotsp",   "u_wsp",       "u_csp",      "u_wsp_worst", "u_wsp_best",
    "u_csp_worst", "u_csp_best"};

// 10 significant digits, shortest form.
std::string csv_number(double x);

// Header comment line carrying the tool version and config digest.
std::string provenance_comment(const std::string& config_hash);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows,
                     const std::string& config_hash);
nlohmann::json sweep_to_json(const std::vector<SweepRow>& rows,
                             const std::string& config_hash);

nlohmann::json to_json(const VerificationReport& report);

nlohmann::json to_json(const PreferenceTable& table);
PreferenceTable preference_table_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ComparisonReport& report);
ComparisonReport comparison_report_from_json(const nlohmann::json& j);

// Series columns of a comparison as CSV, thresholds as comment lines.
void write_comparison_csv(std::ostream& out, const ComparisonReport& report,
                          const std::string& config_hash);

nlohmann::json to_json(const BSelection& selection);

}  // namespace iotprice::cli
