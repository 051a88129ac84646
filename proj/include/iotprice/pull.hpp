#pragma once

#include "iotprice/model.hpp"

namespace iotprice {

// Pull model: IoTSP, WSP and CSP all price end-users simultaneously.

// kLowAd when d*ba1 <= d_max/3 (the boundary belongs to the low branch),
// kHighAd otherwise. Pull never reports kBoundary.
Regime pull_regime(const MarketParams& params, const AdState& ad);

// The unique Nash equilibrium of the simultaneous pricing game.
EquilibriumOutcome pull_ne(const MarketParams& params, const AdState& ad);

}  // namespace iotprice
