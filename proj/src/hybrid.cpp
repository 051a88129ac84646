#include "iotprice/hybrid.hpp"

#include <algorithm>

namespace iotprice {

Regime hybrid_regime(const MarketParams& params, const AdState& ad) {
  params.validate();
  return params.d * ad.ad_rev() < 2.0 * params.d_max ? Regime::kLowAd
                                                     : Regime::kHighAd;
}

FollowerResponse hybrid_followers_eq(double c, const MarketParams& params,
                                     const AdState& ad) {
  params.validate();
  if (!(c >= 0.0))
    throw InvalidParameter("CSP payment c must be >= 0");
  const double d = params.d;
  const double d_max = params.d_max;
  const double r = ad.ad_rev();

  if (c > r - d_max / (2.0 * d)) {
    return {std::min(d_max / (3.0 * d) - 2.0 * r / 3.0 + 2.0 * c / 3.0,
                     d_max / d),
            std::max(d_max / (3.0 * d) + r / 3.0 - c / 3.0, 0.0)};
  }
  // Ad revenue covers the CSP charge by at least d_max/(2d): the IoTSP gives
  // the service away and the WSP prices as a monopolist.
  return {0.0, d_max / (2.0 * d)};
}

double hybrid_csp_price(const MarketParams& params, const AdState& ad) {
  const double d = params.d;
  const double d_max = params.d_max;
  const double r = ad.ad_rev();
  if (hybrid_regime(params, ad) == Regime::kLowAd)
    return r / 2.0 + d_max / (2.0 * d);
  return r - d_max / (2.0 * d);
}

EquilibriumOutcome hybrid_spne(const MarketParams& params, const AdState& ad) {
  const double d = params.d;
  const double d_max = params.d_max;
  const double r = ad.ad_rev();

  EquilibriumOutcome out;
  out.model = Model::kHybrid;
  out.regime = hybrid_regime(params, ad);
  out.unique = true;
  out.profile.eff.c = hybrid_csp_price(params, ad);

  if (out.regime == Regime::kLowAd) {
    const double t = d_max / (6.0 * d) + r / 6.0;
    out.profile.p_i = 2.0 * d_max / (3.0 * d) - r / 3.0;
    out.profile.eff.w = t;
    out.payoffs.demand = (d_max + d * r) / 6.0;
    out.payoffs.u_iotsp = d * t * t;
    out.payoffs.u_wsp = out.payoffs.u_iotsp;
    out.payoffs.u_csp = 3.0 * out.payoffs.u_iotsp;
  } else {
    out.profile.p_i = 0.0;
    out.profile.eff.w = d_max / (2.0 * d);
    out.payoffs.demand = d_max / 2.0;
    out.payoffs.u_iotsp = d_max * d_max / (4.0 * d);
    out.payoffs.u_wsp = out.payoffs.u_iotsp;
    out.payoffs.u_csp = (r - d_max / (2.0 * d)) * d_max / 2.0;
  }
  const double u_wsp = out.payoffs.u_wsp;
  const double u_csp = out.payoffs.u_csp;
  out.bounds = {u_wsp, u_wsp, u_csp, u_csp};
  out.unit = unit_prices(out.profile.eff, params, ad);
  return out;
}

}  // namespace iotprice
