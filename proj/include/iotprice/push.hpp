#pragma once

#include <optional>

#include "iotprice/model.hpp"

namespace iotprice {

// Push model: WSP and CSP price the IoTSP simultaneously (leaders), then the
// IoTSP prices the bundled service to end-users (follower).

// Segment of leader equilibria w + c = sum with both components inside
// [component_min, component_max].
struct PushSegment {
  double sum = 0.0;
  double component_min = 0.0;
  double component_max = 0.0;

  // Point at selector lambda: lambda = 0 puts w at component_min.
  EffectivePayments at(double lambda) const;
  bool contains(const EffectivePayments& eff, double abs_tol) const;
};

struct PushEquilibriumSet {
  Regime regime = Regime::kLowAd;
  // Present iff regime == kLowAd. p_i is the follower response at the point.
  std::optional<StrategyProfile> unique_point;
  // Present iff regime != kLowAd; a single point on the boundary.
  std::optional<PushSegment> segment;
  double iotsp_payoff = 0.0;
  double wsp_csp_payoff_sum = 0.0;
  LeaderBounds bounds;
};

inline constexpr double kDefaultPushLambda = 0.5;

// d*ba1 within this relative distance of 5*d_max is tagged kBoundary.
inline constexpr double kPushBoundaryRelEps = 1e-12;

Regime push_regime(const MarketParams& params, const AdState& ad);

// IoTSP's unique best response to leader payments (w, c).
double iotsp_best_response_push(double w, double c, const MarketParams& params,
                                const AdState& ad);

PushEquilibriumSet push_leader_equilibrium(const MarketParams& params,
                                           const AdState& ad);

// One SPNE. `lambda` selects the point of the high-ad continuum and is
// ignored when the leader equilibrium is unique. Throws InvalidParameter
// when lambda is outside [0, 1].
EquilibriumOutcome push_spne(const MarketParams& params, const AdState& ad,
                             double lambda = kDefaultPushLambda);

LeaderBounds push_payoff_bounds(const MarketParams& params, const AdState& ad);

}  // namespace iotprice
