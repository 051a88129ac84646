#include "iotprice/push.hpp"

#include <algorithm>
#include <cmath>

namespace iotprice {

EffectivePayments PushSegment::at(double lambda) const {
  const double w = component_min + lambda * (component_max - component_min);
  return {w, sum - w};
}

bool PushSegment::contains(const EffectivePayments& eff,
                           double abs_tol) const {
  return std::fabs(eff.w + eff.c - sum) <= abs_tol &&
         eff.w >= component_min - abs_tol &&
         eff.w <= component_max + abs_tol &&
         eff.c >= component_min - abs_tol && eff.c <= component_max + abs_tol;
}

Regime push_regime(const MarketParams& params, const AdState& ad) {
  params.validate();
  const double scaled_rev = params.d * ad.ad_rev();
  const double threshold = 5.0 * params.d_max;
  if (detail::nearly_equal(scaled_rev, threshold, kPushBoundaryRelEps))
    return Regime::kBoundary;
  return scaled_rev < threshold ? Regime::kLowAd : Regime::kHighAd;
}

double iotsp_best_response_push(double w, double c, const MarketParams& params,
                                const AdState& ad) {
  params.validate();
  if (!(w >= 0.0) || !(c >= 0.0))
    throw InvalidParameter("leader payments must be >= 0");
  const double interior =
      params.d_max / (2.0 * params.d) - ad.ad_rev() / 2.0 + w / 2.0 + c / 2.0;
  return std::max(interior, 0.0);
}

PushEquilibriumSet push_leader_equilibrium(const MarketParams& params,
                                           const AdState& ad) {
  const double d = params.d;
  const double d_max = params.d_max;
  const double r = ad.ad_rev();

  PushEquilibriumSet out;
  out.regime = push_regime(params, ad);
  if (out.regime == Regime::kLowAd) {
    const double lead = d_max / (3.0 * d) + r / 3.0;
    const EffectivePayments eff{lead, lead};
    out.unique_point =
        StrategyProfile{iotsp_best_response_push(lead, lead, params, ad), eff};
    // Scale of the low-ad payoffs: d * (d_max/(6d) + r/6)^2.
    const double t = d_max / (6.0 * d) + r / 6.0;
    out.iotsp_payoff = d * t * t;
    const double leader = 2.0 * out.iotsp_payoff;
    out.wsp_csp_payoff_sum = 2.0 * leader;
    out.bounds = {leader, leader, leader, leader};
    return out;
  }

  PushSegment seg;
  seg.component_min = 2.0 * d_max / d;
  if (out.regime == Regime::kBoundary) {
    seg.component_max = seg.component_min;
    seg.sum = 2.0 * seg.component_min;
  } else {
    seg.component_max = r - 3.0 * d_max / d;
    seg.sum = r - d_max / d;
  }
  out.segment = seg;
  out.iotsp_payoff = d_max * d_max / d;
  out.wsp_csp_payoff_sum = seg.sum * d_max;
  const double worst = seg.component_min * d_max;
  const double best = seg.component_max * d_max;
  out.bounds = {worst, best, worst, best};
  return out;
}

EquilibriumOutcome push_spne(const MarketParams& params, const AdState& ad,
                             double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw InvalidParameter("push selector lambda must lie in [0, 1]");

  const PushEquilibriumSet set = push_leader_equilibrium(params, ad);
  EquilibriumOutcome out;
  out.model = Model::kPush;
  out.regime = set.regime;
  out.unique = set.regime != Regime::kHighAd;
  out.bounds = set.bounds;

  const double d = params.d;
  const double d_max = params.d_max;
  const double r = ad.ad_rev();
  out.profile.p_i = std::max(5.0 * d_max / (6.0 * d) - r / 6.0, 0.0);

  if (set.regime == Regime::kLowAd) {
    out.profile.eff = set.unique_point->eff;
    out.payoffs.demand = (d_max + d * r) / 6.0;
    out.payoffs.u_iotsp = set.iotsp_payoff;
    out.payoffs.u_wsp = set.bounds.wsp_worst;
    out.payoffs.u_csp = set.bounds.csp_worst;
  } else {
    out.profile.p_i = 0.0;
    out.profile.eff = set.segment->at(lambda);
    out.payoffs.demand = d_max;
    out.payoffs.u_iotsp = set.iotsp_payoff;
    out.payoffs.u_wsp = out.profile.eff.w * d_max;
    out.payoffs.u_csp = out.profile.eff.c * d_max;
  }
  out.unit = unit_prices(out.profile.eff, params, ad);
  return out;
}

LeaderBounds push_payoff_bounds(const MarketParams& params,
                                const AdState& ad) {
  return push_leader_equilibrium(params, ad).bounds;
}

}  // namespace iotprice
