#include <gtest/gtest.h>

#include <cmath>

#include "iotprice/push.hpp"
#include "reference.hpp"

namespace iotprice {
namespace {

MarketParams market(double d = 1.0, double d_max = 15.0) {
  MarketParams p;
  p.d = d;
  p.d_max = d_max;
  return p;
}

AdState rev(double r, const MarketParams& p) {
  return AdState::from_revenue(r, 1.0, p);
}

TEST(PushFollower, ClampsAtZero) {
  const MarketParams p = market();
  EXPECT_DOUBLE_EQ(iotsp_best_response_push(6, 6, p, rev(3, p)), 12.0);
  EXPECT_DOUBLE_EQ(iotsp_best_response_push(0, 0, p, rev(100, p)), 0.0);
  EXPECT_THROW(iotsp_best_response_push(-1, 0, p, rev(0, p)),
               InvalidParameter);
}

TEST(PushFollower, MatchesNumericArgmax) {
  ref::InstanceGen gen(3);
  std::mt19937_64 rng(4);
  for (int i = 0; i < 200; ++i) {
    const ref::Game g = gen.next();
    const MarketParams p = market(g.d, g.D);
    std::uniform_real_distribution<double> u(0.0, 2.0 * (g.R + g.D / g.d));
    const double w = u(rng), c = u(rng);
    const double lib = iotsp_best_response_push(w, c, p, rev(g.R, p));
    const double num = ref::push_follower(g, w, c);
    // When w + c exceeds R + D/d every price that shuts demand down is a
    // best reply; only the outcome is pinned.
    if (w + c < g.R + g.D / g.d) {
      EXPECT_NEAR(lib, num, 1e-6 * std::max(1.0, g.D / g.d));
    } else {
      EXPECT_GE(lib, g.D / g.d);
      EXPECT_NEAR(num, g.D / g.d, 1e-6 * std::max(1.0, g.D / g.d));
    }
  }
}

TEST(PushSpne, LowRevenueExample) {
  const MarketParams p = market();
  const EquilibriumOutcome e = push_spne(p, rev(3, p));
  EXPECT_EQ(e.regime, Regime::kLowAd);
  EXPECT_TRUE(e.unique);
  EXPECT_DOUBLE_EQ(e.profile.p_i, 12.0);
  EXPECT_DOUBLE_EQ(e.profile.eff.w, 6.0);
  EXPECT_DOUBLE_EQ(e.profile.eff.c, 6.0);
  EXPECT_DOUBLE_EQ(e.payoffs.u_iotsp, 9.0);
  EXPECT_DOUBLE_EQ(e.payoffs.u_wsp, 18.0);
  EXPECT_DOUBLE_EQ(e.payoffs.u_csp, 18.0);
  EXPECT_DOUBLE_EQ(e.bounds.wsp_worst, e.bounds.wsp_best);
}

TEST(PushSpne, HighRevenueContinuum) {
  const MarketParams p = market();
  const PushEquilibriumSet set = push_leader_equilibrium(p, rev(90, p));
  ASSERT_TRUE(set.segment.has_value());
  EXPECT_FALSE(set.unique_point.has_value());
  EXPECT_DOUBLE_EQ(set.segment->sum, 75.0);
  EXPECT_DOUBLE_EQ(set.segment->component_min, 30.0);
  EXPECT_DOUBLE_EQ(set.segment->component_max, 45.0);
  EXPECT_DOUBLE_EQ(set.iotsp_payoff, 225.0);
  EXPECT_DOUBLE_EQ(set.wsp_csp_payoff_sum, 75.0 * 15.0);
  EXPECT_DOUBLE_EQ(set.bounds.wsp_worst, 450.0);
  EXPECT_DOUBLE_EQ(set.bounds.wsp_best, 675.0);

  const EquilibriumOutcome lo = push_spne(p, rev(90, p), 0.0);
  const EquilibriumOutcome hi = push_spne(p, rev(90, p), 1.0);
  EXPECT_FALSE(lo.unique);
  EXPECT_DOUBLE_EQ(lo.profile.eff.w, 30.0);
  EXPECT_DOUBLE_EQ(hi.profile.eff.w, 45.0);
  EXPECT_DOUBLE_EQ(lo.payoffs.u_csp, lo.bounds.csp_best);
  EXPECT_DOUBLE_EQ(hi.payoffs.u_csp, hi.bounds.csp_worst);
  EXPECT_DOUBLE_EQ(lo.profile.p_i, 0.0);
}

TEST(PushSpne, RejectsSelectorOutsideUnitInterval) {
  const MarketParams p = market();
  EXPECT_THROW(push_spne(p, rev(90, p), 1.5), InvalidParameter);
  EXPECT_THROW(push_spne(p, rev(90, p), -0.1), InvalidParameter);
}

TEST(PushSpne, BoundaryIsDegenerateSegment) {
  const MarketParams p = market();
  EXPECT_EQ(push_regime(p, rev(75, p)), Regime::kBoundary);
  const EquilibriumOutcome e = push_spne(p, rev(75, p));
  EXPECT_DOUBLE_EQ(e.profile.eff.w, 30.0);
  EXPECT_DOUBLE_EQ(e.profile.eff.c, 30.0);
  EXPECT_DOUBLE_EQ(e.payoffs.u_iotsp, 225.0);
  EXPECT_EQ(push_regime(p, rev(74.9, p)), Regime::kLowAd);
  EXPECT_EQ(push_regime(p, rev(75.1, p)), Regime::kHighAd);
}

// Each leader's numeric best reply (against a numeric follower) to the other
// leader's closed-form payment reproduces its own closed-form payment.
TEST(PushSpne, ClosedFormIsFixedPointOfNumericBestReplies) {
  ref::InstanceGen gen(21);
  for (int i = 0; i < 60; ++i) {
    const ref::Game g = gen.next();
    const MarketParams p = market(g.d, g.D);
    const AdState ad = rev(g.R, p);
    const EquilibriumOutcome e = push_spne(p, ad);
    const double w = e.profile.eff.w, c = e.profile.eff.c;
    const double hi = g.R + g.D / g.d;
    const double uw = ref::push_outcome(g, w, c).u_w;
    const double uc = ref::push_outcome(g, w, c).u_c;
    const double bw = ref::argmax(
        [&](double x) { return ref::push_outcome(g, x, c).u_w; }, 0.0, hi);
    const double bc = ref::argmax(
        [&](double x) { return ref::push_outcome(g, w, x).u_c; }, 0.0, hi);
    EXPECT_LE(ref::push_outcome(g, bw, c).u_w - uw, 1e-9 * std::max(1.0, uw));
    EXPECT_LE(ref::push_outcome(g, w, bc).u_c - uc, 1e-9 * std::max(1.0, uc));
    if (e.unique) {
      EXPECT_NEAR(bw, w, 1e-6 * std::max(1.0, hi)) << g.R;
      EXPECT_NEAR(bc, c, 1e-6 * std::max(1.0, hi)) << g.R;
    }
    EXPECT_NEAR(ref::push_follower(g, w, c), e.profile.p_i,
                1e-7 * std::max(1.0, g.D / g.d));
  }
}

// Best-reply dynamics started at zero settle near the closed form (or on the
// segment).
TEST(PushSpne, BestReplyDynamicsSettleNearClosedForm) {
  ref::InstanceGen gen(22);
  for (int i = 0; i < 20; ++i) {
    const ref::Game g = gen.next();
    const MarketParams p = market(g.d, g.D);
    const PushEquilibriumSet set = push_leader_equilibrium(p, rev(g.R, p));
    const ref::Point s = ref::push(g);
    const double scale = std::max(1.0, g.R + g.D / g.d);
    if (set.unique_point) {
      EXPECT_NEAR(s.w, set.unique_point->eff.w, 1e-4 * scale) << g.R;
      EXPECT_NEAR(s.c, set.unique_point->eff.c, 1e-4 * scale) << g.R;
    } else {
      EXPECT_TRUE(set.segment->contains({s.w, s.c}, 1e-4 * scale)) << g.R;
    }
    EXPECT_TRUE(ref::close(s.u_i, set.iotsp_payoff, 1e-4)) << g.R;
  }
}

TEST(PushSpne, SegmentEndpointsAreLeaderEquilibria) {
  const MarketParams p = market(2.0, 40.0);
  const double r = 200.0;  // d r = 400 > 5 d_max
  const ref::Game g{2.0, 40.0, r};
  const PushEquilibriumSet set = push_leader_equilibrium(p, rev(r, p));
  for (double lambda : {0.0, 0.3, 1.0}) {
    const EffectivePayments e = set.segment->at(lambda);
    // Neither leader gains by moving alone (numeric follower).
    const double uw = ref::push_outcome(g, e.w, e.c).u_w;
    const double uc = ref::push_outcome(g, e.w, e.c).u_c;
    const double best_w = ref::argmax(
        [&](double x) { return ref::push_outcome(g, x, e.c).u_w; }, 0, 400);
    const double best_c = ref::argmax(
        [&](double x) { return ref::push_outcome(g, e.w, x).u_c; }, 0, 400);
    EXPECT_LE(ref::push_outcome(g, best_w, e.c).u_w - uw, 1e-7 * uw);
    EXPECT_LE(ref::push_outcome(g, e.w, best_c).u_c - uc, 1e-7 * uc);
  }
  // Just outside the segment the short side gains.
  const EffectivePayments below{set.segment->component_min - 1.0,
                                set.segment->sum -
                                    set.segment->component_min + 1.0};
  const double here = ref::push_outcome(g, below.w, below.c).u_w;
  EXPECT_GT(ref::push_outcome(g, below.w + 1.0, below.c - 1.0).u_w, here);
}

TEST(PushSpne, IotspPayoffMonotoneAndFlatBeyondThreshold) {
  const MarketParams p = market();
  double prev = -1.0;
  for (double r = 0.0; r <= 150.0; r += 0.5) {
    const double u = push_spne(p, rev(r, p)).payoffs.u_iotsp;
    EXPECT_GE(u, prev - 1e-12);
    if (r >= 75.0) {
      EXPECT_DOUBLE_EQ(u, 225.0);
    }
    prev = u;
  }
}

TEST(PushSpne, SpnePriceFormula) {
  ref::InstanceGen gen(5);
  for (int i = 0; i < 100; ++i) {
    const ref::Game g = gen.next();
    const MarketParams p = market(g.d, g.D);
    const EquilibriumOutcome e = push_spne(p, rev(g.R, p));
    const double expect = std::max(5 * g.D / (6 * g.d) - g.R / 6, 0.0);
    EXPECT_NEAR(e.profile.p_i, expect, 1e-9 * std::max(1.0, expect));
  }
}

}  // namespace
}  // namespace iotprice
