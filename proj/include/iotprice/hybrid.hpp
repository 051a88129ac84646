#pragma once

#include "iotprice/model.hpp"

namespace iotprice {

// Hybrid model: the CSP prices the IoTSP (leader); the IoTSP and the WSP then
// price end-users simultaneously (followers).

struct FollowerResponse {
  double p_i = 0.0;
  double w = 0.0;
};

// kLowAd when d*ba1 < 2*d_max, kHighAd otherwise (boundary belongs to the
// high branch).
Regime hybrid_regime(const MarketParams& params, const AdState& ad);

// Unique IoTSP/WSP equilibrium of the follower stage for CSP payment c.
FollowerResponse hybrid_followers_eq(double c, const MarketParams& params,
                                     const AdState& ad);

// CSP's subgame-perfect effective payment c*.
double hybrid_csp_price(const MarketParams& params, const AdState& ad);

EquilibriumOutcome hybrid_spne(const MarketParams& params, const AdState& ad);

}  // namespace iotprice
