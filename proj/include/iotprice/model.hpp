#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace iotprice {

// Thrown whenever an input violates the invariants of the market data model.
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Model { kPush, kPull, kHybrid };

std::string_view to_string(Model model);
std::optional<Model> parse_model(std::string_view name);

inline constexpr Model kAllModels[] = {Model::kPush, Model::kPull,
                                       Model::kHybrid};

// Affine cloud-overhead map: extra cloud resource per user a2 = kappa * a1.
struct CloudOverhead {
  double kappa = 0.5;

  double operator()(double a1) const { return kappa * a1; }
};

// Demand curve and per-user resource intensities shared by all three models.
struct MarketParams {
  double d = 1.0;       // end-user price sensitivity
  double d_max = 15.0;  // demand at zero price
  double alpha = 1.0;   // per-user application data flow
  double beta = 1.0;    // per-user application cloud capacity
  CloudOverhead a2_model;

  // Throws InvalidParameter when d <= 0, d_max <= 0, alpha < 0, beta < 0 or
  // kappa < 0 (a negative kappa makes the overhead map decreasing).
  void validate() const;
};

// Advertiser-side state. ad_rev() is always b * a1 and a2() is always the
// overhead map of the paired MarketParams applied to a1.
class AdState {
 public:
  AdState(double b, double a1, const MarketParams& params);

  // Builds the state realising ad revenue per user `revenue` with volume
  // `a1`. With a1 == 0 only zero revenue is representable.
  static AdState from_revenue(double revenue, double a1,
                              const MarketParams& params);

  double b() const { return b_; }
  double a1() const { return a1_; }
  double a2() const { return a2_; }
  double ad_rev() const { return ad_rev_; }

 private:
  double b_;
  double a1_;
  double a2_;
  double ad_rev_;
};

struct PriceProfile {
  double p_i = 0.0;  // IoTSP price to end-users
  double p_w = 0.0;  // WSP price per data unit
  double p_c = 0.0;  // CSP price per resource unit

  void validate() const;
};

// Per-user payments: w = p_w (alpha + a1), c = p_c (beta + a2). Every
// equilibrium in this library is computed in these coordinates.
struct EffectivePayments {
  double w = 0.0;
  double c = 0.0;
};

// IoTSP price plus effective leader/peer payments; the coordinates of a
// strategy profile in all three models.
struct StrategyProfile {
  double p_i = 0.0;
  EffectivePayments eff;
};

struct PayoffTriple {
  double u_iotsp = 0.0;
  double u_wsp = 0.0;
  double u_csp = 0.0;
  double demand = 0.0;
};

// Unit prices recovered from effective payments. A component is empty when
// its per-user volume (alpha + a1, resp. beta + a2) is zero.
struct UnitPrices {
  std::optional<double> p_w;
  std::optional<double> p_c;
};

EffectivePayments effective_payments(const PriceProfile& profile,
                                     const MarketParams& params,
                                     const AdState& ad);

UnitPrices unit_prices(const EffectivePayments& eff,
                       const MarketParams& params, const AdState& ad);

// Realised end-user demand, clamped to [0, d_max].
double demand(Model model, const PriceProfile& profile,
              const MarketParams& params, const AdState& ad);
double demand(Model model, const StrategyProfile& profile,
              const MarketParams& params, const AdState& ad);

// Payoffs of the three providers at an arbitrary (not necessarily
// equilibrium) price profile.
PayoffTriple payoffs(Model model, const PriceProfile& profile,
                     const MarketParams& params, const AdState& ad);
PayoffTriple payoffs(Model model, const StrategyProfile& profile,
                     const MarketParams& params, const AdState& ad);

// Which branch of a model's closed-form equilibrium applies.
enum class Regime { kLowAd, kHighAd, kBoundary };

std::string_view to_string(Regime regime);

// Worst and best per-leader payoffs across an equilibrium set. Outside the
// push continuum all four collapse onto the point payoffs.
struct LeaderBounds {
  double wsp_worst = 0.0;
  double wsp_best = 0.0;
  double csp_worst = 0.0;
  double csp_best = 0.0;
};

struct EquilibriumOutcome {
  Model model = Model::kPush;
  Regime regime = Regime::kLowAd;
  bool unique = true;
  StrategyProfile profile;
  UnitPrices unit;
  PayoffTriple payoffs;
  LeaderBounds bounds;
};

namespace detail {

// Relative closeness used for regime-boundary classification.
bool nearly_equal(double a, double b, double rel_eps);

}  // namespace detail

}  // namespace iotprice
