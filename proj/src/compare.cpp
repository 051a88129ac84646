#include "iotprice/compare.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "iotprice/ad_market.hpp"
#include "iotprice/equilibrium.hpp"

namespace iotprice {

namespace {

constexpr double kOrderingRelEps = 1e-9;
const double kSqrt2Minus1 = std::sqrt(2.0) - 1.0;

struct ThresholdDef {
  const char* name;
  double multiple;  // of d_max / d
};

const ThresholdDef kThresholds[] = {
    {"pull_free", 1.0 / 3.0},   {"wsp_push_pull", kSqrt2Minus1},
    {"wsp_hybrid_pull", 1.0},   {"hybrid_free", 2.0},
    {"push_free", 5.0},         {"csp_push_hybrid", 5.5},
};

AdState revenue_state(double rev, const MarketParams& params) {
  return AdState::from_revenue(rev, 1.0, params);
}

// Low-branch payoff of the entity whose payoff stops growing at a regime
// switch, minus its saturated value; changes sign exactly at the switch.
double growth_gap(double rev, const MarketParams& params, double divisor,
                  double saturated) {
  const double base = params.d_max + params.d * rev;
  return base * base / (divisor * params.d) - saturated;
}

// Finds a sign change of f on [lo, hi] down to kThresholdBracketWidth.
bool bisect(const std::function<double(double)>& f, double& lo, double& hi) {
  double f_lo = f(lo);
  const double f_hi = f(hi);
  if (f_lo == 0.0) {
    hi = lo;
    return true;
  }
  if (f_hi == 0.0) {
    lo = hi;
    return true;
  }
  if (std::signbit(f_lo) == std::signbit(f_hi))
    return false;
  while (hi - lo > kThresholdBracketWidth) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi)
      break;
    const double f_mid = f(mid);
    if (f_mid == 0.0) {
      lo = hi = mid;
      break;
    }
    if (std::signbit(f_mid) == std::signbit(f_lo)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return true;
}

enum class Rel { kGreater, kEqual };

class OrderingChecker {
 public:
  OrderingChecker(double ba1, std::vector<OrderingViolation>& out)
      : ba1_(ba1), out_(out) {}

  void expect(const char* rule, const char* a_name, double a, Rel rel,
              const char* b_name, double b) {
    const bool equal = detail::nearly_equal(a, b, kOrderingRelEps);
    const bool ok = rel == Rel::kEqual ? equal : (a > b && !equal);
    if (ok)
      return;
    out_.push_back(
        {ba1_, rule,
         fmt::format("expected {} {} {} but got {:.12g} vs {:.12g}", a_name,
                     rel == Rel::kEqual ? "==" : ">", b_name, a, b)});
  }

 private:
  double ba1_;
  std::vector<OrderingViolation>& out_;
};

std::vector<Model> argmax_models(double push, double pull, double hybrid) {
  const double best = std::max({push, pull, hybrid});
  std::vector<Model> out;
  if (detail::nearly_equal(push, best, kOrderingRelEps))
    out.push_back(Model::kPush);
  if (detail::nearly_equal(pull, best, kOrderingRelEps))
    out.push_back(Model::kPull);
  if (detail::nearly_equal(hybrid, best, kOrderingRelEps))
    out.push_back(Model::kHybrid);
  return out;
}

}  // namespace

std::string_view to_string(Entity entity) {
  switch (entity) {
    case Entity::kEndUsers:
      return "end_users";
    case Entity::kIotsp:
      return "iotsp";
    case Entity::kWsp:
      return "wsp";
    case Entity::kCsp:
      return "csp";
    case Entity::kAdvertisers:
      return "advertisers";
  }
  return "unknown";
}

std::function<double(double)> threshold_difference(
    std::string_view name, const MarketParams& params) {
  const double d = params.d;
  const double d_max = params.d_max;
  if (name == "pull_free") {
    return [=](double rev) {
      return growth_gap(rev, params, 16.0, d_max * d_max / (9.0 * d));
    };
  }
  if (name == "hybrid_free") {
    return [=](double rev) {
      return growth_gap(rev, params, 36.0, d_max * d_max / (4.0 * d));
    };
  }
  if (name == "push_free") {
    return [=](double rev) {
      return growth_gap(rev, params, 36.0, d_max * d_max / d);
    };
  }
  if (name == "wsp_push_pull") {
    return [=](double rev) {
      const AdState ad = revenue_state(rev, params);
      return push_payoff_bounds(params, ad).wsp_worst -
             pull_ne(params, ad).payoffs.u_wsp;
    };
  }
  if (name == "wsp_hybrid_pull") {
    return [=](double rev) {
      const AdState ad = revenue_state(rev, params);
      return hybrid_spne(params, ad).payoffs.u_wsp -
             pull_ne(params, ad).payoffs.u_wsp;
    };
  }
  if (name == "csp_push_hybrid") {
    return [=](double rev) {
      const AdState ad = revenue_state(rev, params);
      return push_payoff_bounds(params, ad).csp_best -
             hybrid_spne(params, ad).payoffs.u_csp;
    };
  }
  throw InvalidParameter(fmt::format("unknown threshold '{}'", name));
}

std::vector<Threshold> crossing_points(const MarketParams& params) {
  params.validate();
  const double unit = params.d_max / params.d;
  std::vector<Threshold> out;
  for (const ThresholdDef& def : kThresholds) {
    Threshold t;
    t.name = def.name;
    t.value = def.multiple * unit;
    double lo = 0.5 * t.value;
    double hi = 1.5 * t.value;
    const bool changed = bisect(threshold_difference(t.name, params), lo, hi);
    t.bracket_lo = lo;
    t.bracket_hi = hi;
    // Allow for rounding in the evaluation of the difference itself.
    const double slack = kThresholdBracketWidth + 1e-12 * t.value;
    t.confirmed = changed && hi - lo <= kThresholdBracketWidth &&
                  t.value >= lo - slack && t.value <= hi + slack;
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<OrderingViolation> check_orderings(const MarketParams& params,
                                               double ba1,
                                               double push_lambda) {
  const AdState ad = revenue_state(ba1, params);
  const EquilibriumOutcome push = push_spne(params, ad, push_lambda);
  const EquilibriumOutcome pull = pull_ne(params, ad);
  const EquilibriumOutcome hybrid = hybrid_spne(params, ad);

  const double x = params.d * ba1;
  const double d_max = params.d_max;
  auto at = [&](double k) {
    return detail::nearly_equal(x, k * d_max, kOrderingRelEps);
  };
  auto below = [&](double k) { return x < k * d_max && !at(k); };

  std::vector<OrderingViolation> out;
  OrderingChecker check(ba1, out);
  const Rel gt = Rel::kGreater;
  const Rel eq = Rel::kEqual;

  // Demand.
  const double q_push = push.payoffs.demand;
  const double q_pull = pull.payoffs.demand;
  const double q_hybrid = hybrid.payoffs.demand;
  if (below(1.0)) {
    check.expect("demand", "pull", q_pull, gt, "push", q_push);
    check.expect("demand", "push", q_push, eq, "hybrid", q_hybrid);
  } else if (at(1.0)) {
    check.expect("demand", "pull", q_pull, eq, "push", q_push);
    check.expect("demand", "push", q_push, eq, "hybrid", q_hybrid);
  } else if (below(2.0) || at(2.0)) {
    check.expect("demand", "push", q_push, eq, "hybrid", q_hybrid);
    check.expect("demand", "hybrid", q_hybrid, gt, "pull", q_pull);
  } else {
    check.expect("demand", "push", q_push, gt, "hybrid", q_hybrid);
    check.expect("demand", "hybrid", q_hybrid, gt, "pull", q_pull);
  }

  // IoTSP.
  const double i_push = push.payoffs.u_iotsp;
  const double i_pull = pull.payoffs.u_iotsp;
  const double i_hybrid = hybrid.payoffs.u_iotsp;
  check.expect("iotsp", "pull", i_pull, gt, "push", i_push);
  if (below(2.0) || at(2.0))
    check.expect("iotsp", "push", i_push, eq, "hybrid", i_hybrid);
  else
    check.expect("iotsp", "push", i_push, gt, "hybrid", i_hybrid);

  // WSP; the push side is the worst equilibrium payoff.
  const double w_push = push.bounds.wsp_worst;
  const double w_pull = pull.payoffs.u_wsp;
  const double w_hybrid = hybrid.payoffs.u_wsp;
  if (below(kSqrt2Minus1)) {
    check.expect("wsp", "pull", w_pull, gt, "push", w_push);
    check.expect("wsp", "push", w_push, gt, "hybrid", w_hybrid);
  } else if (at(kSqrt2Minus1)) {
    check.expect("wsp", "pull", w_pull, eq, "push", w_push);
    check.expect("wsp", "push", w_push, gt, "hybrid", w_hybrid);
  } else if (below(1.0)) {
    check.expect("wsp", "push", w_push, gt, "pull", w_pull);
    check.expect("wsp", "pull", w_pull, gt, "hybrid", w_hybrid);
  } else if (at(1.0)) {
    check.expect("wsp", "push", w_push, gt, "pull", w_pull);
    check.expect("wsp", "pull", w_pull, eq, "hybrid", w_hybrid);
  } else {
    check.expect("wsp", "push", w_push, gt, "hybrid", w_hybrid);
    check.expect("wsp", "hybrid", w_hybrid, gt, "pull", w_pull);
  }

  // CSP against both ends of the push range.
  const double c_worst = push.bounds.csp_worst;
  const double c_best = push.bounds.csp_best;
  const double c_pull = pull.payoffs.u_csp;
  const double c_hybrid = hybrid.payoffs.u_csp;
  if (below(kSqrt2Minus1)) {
    check.expect("csp", "hybrid", c_hybrid, gt, "pull", c_pull);
    check.expect("csp", "pull", c_pull, gt, "push", c_best);
  } else if (at(kSqrt2Minus1)) {
    check.expect("csp", "hybrid", c_hybrid, gt, "pull", c_pull);
    check.expect("csp", "pull", c_pull, eq, "push", c_best);
  } else if (below(5.5)) {
    check.expect("csp", "hybrid", c_hybrid, gt, "push_best", c_best);
    check.expect("csp", "push_worst", c_worst, gt, "pull", c_pull);
  } else if (at(5.5)) {
    check.expect("csp", "hybrid", c_hybrid, eq, "push_best", c_best);
    check.expect("csp", "hybrid", c_hybrid, gt, "push_worst", c_worst);
    check.expect("csp", "push_worst", c_worst, gt, "pull", c_pull);
  } else {
    check.expect("csp", "push_best", c_best, gt, "hybrid", c_hybrid);
    check.expect("csp", "hybrid", c_hybrid, gt, "push_worst", c_worst);
    check.expect("csp", "push_worst", c_worst, gt, "pull", c_pull);
  }
  return out;
}

PreferenceTable table1(const MarketParams& params, double low_rev,
                       double high_rev, double push_csp_share) {
  params.validate();
  if (!(push_csp_share >= 0.0 && push_csp_share <= 1.0))
    throw InvalidParameter("push_csp_share must lie in [0, 1]");
  const double unit = params.d_max / params.d;
  if (!(low_rev >= 0.0 && low_rev < unit / 3.0))
    throw RegimeError("low ad revenue must lie below every threshold");
  if (!(high_rev > 5.5 * unit) || !std::isfinite(high_rev))
    throw RegimeError("high ad revenue must lie above every threshold");

  const AdState low = revenue_state(low_rev, params);
  const AdState high = revenue_state(high_rev, params);
  // Push lambda positions the WSP, so the CSP share runs the other way.
  const double lambda = 1.0 - push_csp_share;
  const EquilibriumOutcome lo[] = {push_spne(params, low, lambda),
                                   pull_ne(params, low),
                                   hybrid_spne(params, low)};
  const EquilibriumOutcome hi[] = {push_spne(params, high, lambda),
                                   pull_ne(params, high),
                                   hybrid_spne(params, high)};

  PreferenceTable table;
  table.low_rev = low_rev;
  table.high_rev = high_rev;
  table.push_csp_share = push_csp_share;

  auto add = [&](Entity entity, auto value_of) {
    PreferenceRow row;
    row.entity = entity;
    row.low = argmax_models(value_of(lo[0]), value_of(lo[1]), value_of(lo[2]));
    row.high = argmax_models(value_of(hi[0]), value_of(hi[1]),
                             value_of(hi[2]));
    row.high_selected = row.high;
    table.rows.push_back(std::move(row));
  };
  // A participating firm's payoff scales with demand; a unit margin ranks it.
  auto advertiser = [](const EquilibriumOutcome& e) {
    return advertiser_payoff(1.0, 0.0, e.payoffs.demand);
  };
  add(Entity::kEndUsers,
      [](const EquilibriumOutcome& e) { return e.payoffs.demand; });
  add(Entity::kIotsp,
      [](const EquilibriumOutcome& e) { return e.payoffs.u_iotsp; });
  add(Entity::kWsp,
      [](const EquilibriumOutcome& e) { return e.bounds.wsp_worst; });

  // CSP: hybrid beats the push worst case at high revenue, the push best
  // case beats hybrid, so the answer hinges on the selected push point.
  PreferenceRow csp;
  csp.entity = Entity::kCsp;
  csp.low = argmax_models(lo[0].payoffs.u_csp, lo[1].payoffs.u_csp,
                          lo[2].payoffs.u_csp);
  const double hybrid_csp = hi[2].payoffs.u_csp;
  const double worst = hi[0].bounds.csp_worst;
  const double best = hi[0].bounds.csp_best;
  if (best > hybrid_csp && worst < hybrid_csp) {
    csp.high = {Model::kHybrid, Model::kPush};
    const double cut = (hybrid_csp - worst) / (best - worst);
    csp.condition = fmt::format(
        "push iff the CSP's share of the push equilibrium range exceeds "
        "{:.10g} (push lambda < {:.10g})",
        cut, 1.0 - cut);
  } else {
    csp.high = argmax_models(worst, hi[1].payoffs.u_csp, hybrid_csp);
  }
  csp.high_selected = argmax_models(hi[0].payoffs.u_csp, hi[1].payoffs.u_csp,
                                    hybrid_csp);
  table.rows.push_back(std::move(csp));

  add(Entity::kAdvertisers, advertiser);
  return table;
}

ComparisonReport compare_models(const MarketParams& params, double lo,
                                double hi, int samples, double push_lambda) {
  params.validate();
  if (!(lo >= 0.0) || !(hi >= lo) || !std::isfinite(hi))
    throw InvalidParameter("ad revenue range must satisfy 0 <= lo <= hi");
  if (samples < 2)
    throw InvalidParameter("need at least 2 samples");
  if (!(push_lambda >= 0.0 && push_lambda <= 1.0))
    throw InvalidParameter("push selector lambda must lie in [0, 1]");

  ComparisonReport report;
  report.params = params;
  report.push_lambda = push_lambda;
  report.thresholds = crossing_points(params);

  std::vector<double>& axis = report.ba1_axis;
  for (int i = 0; i < samples; ++i)
    axis.push_back(lo + (hi - lo) * i / (samples - 1));
  const double offset = 1e-6 * std::max(1.0, params.d_max / params.d);
  for (const Threshold& t : report.thresholds) {
    for (double v : {t.value - offset, t.value, t.value + offset}) {
      if (v >= lo && v <= hi)
        axis.push_back(v);
    }
  }
  std::sort(axis.begin(), axis.end());
  axis.erase(std::unique(axis.begin(), axis.end()), axis.end());

  auto append = [](ModelSeries& s, const EquilibriumOutcome& e) {
    s.demand.push_back(e.payoffs.demand);
    s.u_iotsp.push_back(e.payoffs.u_iotsp);
    s.u_wsp.push_back(e.payoffs.u_wsp);
    s.u_csp.push_back(e.payoffs.u_csp);
  };
  for (double rev : axis) {
    const AdState ad = revenue_state(rev, params);
    const EquilibriumOutcome push = push_spne(params, ad, push_lambda);
    append(report.push, push);
    append(report.pull, pull_ne(params, ad));
    append(report.hybrid, hybrid_spne(params, ad));
    report.push_bounds.wsp_worst.push_back(push.bounds.wsp_worst);
    report.push_bounds.wsp_best.push_back(push.bounds.wsp_best);
    report.push_bounds.csp_worst.push_back(push.bounds.csp_worst);
    report.push_bounds.csp_best.push_back(push.bounds.csp_best);
    for (OrderingViolation& v : check_orderings(params, rev, push_lambda))
      report.violations.push_back(std::move(v));
  }

  const double unit = params.d_max / params.d;
  report.table1 = table1(params, unit / 15.0, 8.0 * unit, 1.0 - push_lambda);
  return report;
}

}  // namespace iotprice
