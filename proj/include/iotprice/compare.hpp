#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "iotprice/model.hpp"

namespace iotprice {

class RegimeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Named ad-revenue level at which an equilibrium branch switches or two
// models swap places for some entity.
struct Threshold {
  std::string name;
  double value = 0.0;
  // Bisection bracket of the sign change of the defining difference.
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  bool confirmed = false;
};

inline constexpr double kThresholdBracketWidth = 1e-9;

// pull_free, wsp_push_pull, wsp_hybrid_pull, hybrid_free, push_free,
// csp_push_hybrid, in ascending order of value.
std::vector<Threshold> crossing_points(const MarketParams& params);

// Sign-changing difference whose root is the named threshold.
std::function<double(double)> threshold_difference(std::string_view name,
                                                   const MarketParams& params);

enum class Entity { kEndUsers, kIotsp, kWsp, kCsp, kAdvertisers };

std::string_view to_string(Entity entity);

struct PreferenceRow {
  Entity entity = Entity::kEndUsers;
  std::vector<Model> low;
  // More than one model means the answer depends on the push equilibrium
  // selected; `condition` then says how.
  std::vector<Model> high;
  std::vector<Model> high_selected;
  std::string condition;
};

struct PreferenceTable {
  double low_rev = 0.0;
  double high_rev = 0.0;
  double push_csp_share = 0.5;
  std::vector<PreferenceRow> rows;
};

// Most preferred model per entity at a low and a high ad revenue.
// `push_csp_share` places the CSP inside its push equilibrium range for the
// high-revenue continuum (0 = the CSP's worst point, i.e. push lambda = 1).
// Throws RegimeError unless low_rev < d_max/(3d) and high_rev > 5.5 d_max/d.
PreferenceTable table1(const MarketParams& params, double low_rev,
                       double high_rev, double push_csp_share = 0.5);

struct ModelSeries {
  std::vector<double> demand;
  std::vector<double> u_iotsp;
  std::vector<double> u_wsp;
  std::vector<double> u_csp;
};

struct PushBoundSeries {
  std::vector<double> wsp_worst;
  std::vector<double> wsp_best;
  std::vector<double> csp_worst;
  std::vector<double> csp_best;
};

struct OrderingViolation {
  double ba1 = 0.0;
  std::string rule;
  std::string detail;
};

struct ComparisonReport {
  MarketParams params;
  double push_lambda = 0.5;
  std::vector<double> ba1_axis;
  ModelSeries push;  // at push_lambda
  ModelSeries pull;
  ModelSeries hybrid;
  PushBoundSeries push_bounds;
  std::vector<Threshold> thresholds;
  PreferenceTable table1;
  std::vector<OrderingViolation> violations;
};

// Evaluates all models on `samples` uniform points of [lo, hi] plus every
// threshold (and threshold +/- a small offset) inside the range, then checks
// the demand, IoTSP, WSP and CSP orderings against their case tables.
ComparisonReport compare_models(const MarketParams& params, double lo,
                                double hi, int samples,
                                double push_lambda = 0.5);

// Ordering violations at a single ad revenue.
std::vector<OrderingViolation> check_orderings(const MarketParams& params,
                                               double ba1,
                                               double push_lambda = 0.5);

}  // namespace iotprice
