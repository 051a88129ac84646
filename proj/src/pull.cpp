#include "iotprice/pull.hpp"

namespace iotprice {

Regime pull_regime(const MarketParams& params, const AdState& ad) {
  params.validate();
  return params.d * ad.ad_rev() <= params.d_max / 3.0 ? Regime::kLowAd
                                                      : Regime::kHighAd;
}

EquilibriumOutcome pull_ne(const MarketParams& params, const AdState& ad) {
  const double d = params.d;
  const double d_max = params.d_max;
  const double r = ad.ad_rev();

  EquilibriumOutcome out;
  out.model = Model::kPull;
  out.regime = pull_regime(params, ad);
  out.unique = true;

  if (out.regime == Regime::kLowAd) {
    const double t = d_max / (4.0 * d) + r / 4.0;
    out.profile.p_i = d_max / (4.0 * d) - 3.0 * r / 4.0;
    out.profile.eff = {t, t};
    out.payoffs.demand = (d_max + d * r) / 4.0;
    const double u = d * t * t;
    out.payoffs.u_iotsp = u;
    out.payoffs.u_wsp = u;
    out.payoffs.u_csp = u;
  } else {
    const double lead = d_max / (3.0 * d);
    out.profile.p_i = 0.0;
    out.profile.eff = {lead, lead};
    out.payoffs.demand = d_max / 3.0;
    out.payoffs.u_iotsp = r * d_max / 3.0;
    out.payoffs.u_wsp = d_max * d_max / (9.0 * d);
    out.payoffs.u_csp = out.payoffs.u_wsp;
  }
  const double u_wsp = out.payoffs.u_wsp;
  const double u_csp = out.payoffs.u_csp;
  out.bounds = {u_wsp, u_wsp, u_csp, u_csp};
  out.unit = unit_prices(out.profile.eff, params, ad);
  return out;
}

}  // namespace iotprice
