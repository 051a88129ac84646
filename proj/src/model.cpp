#include "iotprice/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace iotprice {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok)
    throw InvalidParameter(what);
}

bool finite_nonneg(double x) {
  return std::isfinite(x) && x >= 0.0;
}

void validate(const StrategyProfile& profile) {
  require(finite_nonneg(profile.p_i), "p_i must be finite and >= 0");
  require(finite_nonneg(profile.eff.w), "w must be finite and >= 0");
  require(finite_nonneg(profile.eff.c), "c must be finite and >= 0");
}

StrategyProfile to_strategy(const PriceProfile& profile,
                            const MarketParams& params, const AdState& ad) {
  profile.validate();
  return {profile.p_i, effective_payments(profile, params, ad)};
}

}  // namespace

std::string_view to_string(Model model) {
  switch (model) {
    case Model::kPush:
      return "push";
    case Model::kPull:
      return "pull";
    case Model::kHybrid:
      return "hybrid";
  }
  return "unknown";
}

std::optional<Model> parse_model(std::string_view name) {
  for (Model m : kAllModels) {
    if (to_string(m) == name)
      return m;
  }
  return std::nullopt;
}

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::kLowAd:
      return "low";
    case Regime::kHighAd:
      return "high";
    case Regime::kBoundary:
      return "boundary";
  }
  return "unknown";
}

void MarketParams::validate() const {
  require(std::isfinite(d) && d > 0.0, "d must be > 0");
  require(std::isfinite(d_max) && d_max > 0.0, "d_max must be > 0");
  require(finite_nonneg(alpha), "alpha must be >= 0");
  require(finite_nonneg(beta), "beta must be >= 0");
  require(finite_nonneg(a2_model.kappa), "kappa must be >= 0");
}

AdState::AdState(double b, double a1, const MarketParams& params)
    : b_(b), a1_(a1), a2_(0.0), ad_rev_(0.0) {
  params.validate();
  require(finite_nonneg(b), "b must be finite and >= 0");
  require(finite_nonneg(a1), "a1 must be finite and >= 0");
  a2_ = params.a2_model(a1);
  ad_rev_ = b * a1;
}

AdState AdState::from_revenue(double revenue, double a1,
                              const MarketParams& params) {
  require(finite_nonneg(revenue), "ad revenue must be finite and >= 0");
  require(finite_nonneg(a1), "a1 must be finite and >= 0");
  if (a1 == 0.0) {
    require(revenue == 0.0, "non-zero ad revenue needs a1 > 0");
    return AdState(0.0, 0.0, params);
  }
  return AdState(revenue / a1, a1, params);
}

void PriceProfile::validate() const {
  require(finite_nonneg(p_i), "p_i must be finite and >= 0");
  require(finite_nonneg(p_w), "p_w must be finite and >= 0");
  require(finite_nonneg(p_c), "p_c must be finite and >= 0");
}

EffectivePayments effective_payments(const PriceProfile& profile,
                                     const MarketParams& params,
                                     const AdState& ad) {
  return {profile.p_w * (params.alpha + ad.a1()),
          profile.p_c * (params.beta + ad.a2())};
}

UnitPrices unit_prices(const EffectivePayments& eff,
                       const MarketParams& params, const AdState& ad) {
  UnitPrices out;
  const double data_volume = params.alpha + ad.a1();
  const double cloud_volume = params.beta + ad.a2();
  if (data_volume > 0.0)
    out.p_w = eff.w / data_volume;
  if (cloud_volume > 0.0)
    out.p_c = eff.c / cloud_volume;
  return out;
}

double demand(Model model, const StrategyProfile& profile,
              const MarketParams& params, const AdState& ad) {
  params.validate();
  validate(profile);
  (void)ad;
  double end_user_payment = profile.p_i;
  switch (model) {
    case Model::kPush:
      break;
    case Model::kPull:
      end_user_payment += profile.eff.w + profile.eff.c;
      break;
    case Model::kHybrid:
      end_user_payment += profile.eff.w;
      break;
  }
  return std::clamp(params.d_max - params.d * end_user_payment, 0.0,
                    params.d_max);
}

double demand(Model model, const PriceProfile& profile,
              const MarketParams& params, const AdState& ad) {
  return demand(model, to_strategy(profile, params, ad), params, ad);
}

PayoffTriple payoffs(Model model, const StrategyProfile& profile,
                     const MarketParams& params, const AdState& ad) {
  const double q = demand(model, profile, params, ad);
  const double p_i = profile.p_i;
  const double w = profile.eff.w;
  const double c = profile.eff.c;
  const double r = ad.ad_rev();

  PayoffTriple out;
  out.demand = q;
  out.u_wsp = w * q;
  out.u_csp = c * q;
  switch (model) {
    case Model::kPush:
      out.u_iotsp = (p_i + r - w - c) * q;
      break;
    case Model::kPull:
      out.u_iotsp = (p_i + r) * q;
      break;
    case Model::kHybrid:
      out.u_iotsp = (p_i - c + r) * q;
      break;
  }
  return out;
}

PayoffTriple payoffs(Model model, const PriceProfile& profile,
                     const MarketParams& params, const AdState& ad) {
  return payoffs(model, to_strategy(profile, params, ad), params, ad);
}

namespace detail {

bool nearly_equal(double a, double b, double rel_eps) {
  const double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
  return std::fabs(a - b) <= rel_eps * scale;
}

}  // namespace detail

}  // namespace iotprice
