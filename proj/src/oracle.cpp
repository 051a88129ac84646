#include "iotprice/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "iotprice/hybrid.hpp"
#include "iotprice/push.hpp"

namespace iotprice {

namespace {

using PayoffOf = std::function<double(double)>;

// One provider's unilateral deviation problem: its payoff as a function of
// its own price, everything else held fixed (or re-responding).
struct Mover {
  Provider who;
  double current;
  PayoffOf payoff;
};

struct ScanResult {
  double best_price = 0.0;
  double best_payoff = -std::numeric_limits<double>::infinity();
};

// Grid scan followed by `rounds` zoom-ins, each shrinking the window x10
// around the incumbent best point.
ScanResult maximize(const PayoffOf& f, const GridSpec& grid, int rounds) {
  ScanResult best;
  double lo = grid.lo;
  double hi = grid.hi;
  for (int round = 0; round <= rounds; ++round) {
    for (int i = 0; i < grid.steps; ++i) {
      const double x = lo + (hi - lo) * i / (grid.steps - 1);
      const double v = f(x);
      if (v > best.best_payoff) {
        best.best_payoff = v;
        best.best_price = x;
      }
    }
    const double half = (hi - lo) / 20.0;
    lo = std::max(grid.lo, best.best_price - half);
    hi = std::min(grid.hi, best.best_price + half);
  }
  return best;
}

struct MoverOutcome {
  Provider who;
  double gain;
  double deviation;
  double scale;
};

VerificationReport summarize(const std::vector<MoverOutcome>& outcomes,
                             double rel_tol) {
  VerificationReport report;
  double worst_ratio = -1.0;
  for (const MoverOutcome& m : outcomes) {
    const double ratio = m.gain / m.scale;
    if (ratio > worst_ratio) {
      worst_ratio = ratio;
      report.max_gain = m.gain;
      report.relative_gain = ratio;
      report.worst_deviator = m.who;
      report.worst_deviation = m.deviation;
      report.tolerance = rel_tol * m.scale;
    }
  }
  report.passed = report.max_gain <= report.tolerance;
  return report;
}

MoverOutcome scan_mover(const Mover& mover, const GridSpec& grid,
                        int rounds) {
  const double here = mover.payoff(mover.current);
  const ScanResult best = maximize(mover.payoff, grid, rounds);
  MoverOutcome out{mover.who, 0.0, mover.current,
                   std::max(1.0, std::fabs(here))};
  if (best.best_payoff > here) {
    out.gain = best.best_payoff - here;
    out.deviation = best.best_price;
  }
  return out;
}

// Movers of the simultaneous (or follower) stage at a fixed profile.
std::vector<Mover> stage_movers(Model model, const StrategyProfile& profile,
                                const MarketParams& params,
                                const AdState& ad) {
  std::vector<Mover> movers;
  movers.push_back({Provider::kIotsp, profile.p_i, [=, &params, &ad](double x) {
                      StrategyProfile p = profile;
                      p.p_i = x;
                      return payoffs(model, p, params, ad).u_iotsp;
                    }});
  if (model == Model::kPush)
    return movers;
  movers.push_back({Provider::kWsp, profile.eff.w, [=, &params, &ad](double x) {
                      StrategyProfile p = profile;
                      p.eff.w = x;
                      return payoffs(model, p, params, ad).u_wsp;
                    }});
  if (model == Model::kHybrid)
    return movers;
  movers.push_back({Provider::kCsp, profile.eff.c, [=, &params, &ad](double x) {
                      StrategyProfile p = profile;
                      p.eff.c = x;
                      return payoffs(model, p, params, ad).u_csp;
                    }});
  return movers;
}

// Profile reached when the leaders post `eff` and followers best-respond.
StrategyProfile with_followers(Model model, EffectivePayments eff,
                               const MarketParams& params, const AdState& ad) {
  if (model == Model::kPush)
    return {iotsp_best_response_push(eff.w, eff.c, params, ad), eff};
  const FollowerResponse fr = hybrid_followers_eq(eff.c, params, ad);
  return {fr.p_i, {fr.w, eff.c}};
}

std::vector<Mover> leader_movers(Model model, const StrategyProfile& profile,
                                 const MarketParams& params,
                                 const AdState& ad) {
  std::vector<Mover> movers;
  if (model == Model::kPush) {
    movers.push_back(
        {Provider::kWsp, profile.eff.w, [=, &params, &ad](double x) {
           const StrategyProfile p =
               with_followers(model, {x, profile.eff.c}, params, ad);
           return payoffs(model, p, params, ad).u_wsp;
         }});
  }
  movers.push_back({Provider::kCsp, profile.eff.c, [=, &params, &ad](double x) {
                      const StrategyProfile p =
                          with_followers(model, {profile.eff.w, x}, params, ad);
                      return payoffs(model, p, params, ad).u_csp;
                    }});
  return movers;
}

void check_tolerance(double rel_tol) {
  if (!(rel_tol >= 0.0) || !std::isfinite(rel_tol))
    throw InvalidParameter("tolerance must be finite and >= 0");
}

// Discrete deviation check used by the exhaustive search.
bool passes_on_grid(const std::vector<Mover>& movers, const GridSpec& grid,
                    double rel_tol) {
  for (const Mover& m : movers) {
    const double here = m.payoff(m.current);
    const double allowed = rel_tol * std::max(1.0, std::fabs(here));
    for (int i = 0; i < grid.steps; ++i) {
      if (m.payoff(grid.point(i)) - here > allowed)
        return false;
    }
  }
  return true;
}

}  // namespace

std::string_view to_string(Provider provider) {
  switch (provider) {
    case Provider::kIotsp:
      return "iotsp";
    case Provider::kWsp:
      return "wsp";
    case Provider::kCsp:
      return "csp";
  }
  return "unknown";
}

void GridSpec::validate() const {
  if (!std::isfinite(lo) || !std::isfinite(hi) || lo < 0.0 || lo > hi)
    throw InvalidGrid("grid needs 0 <= lo <= hi");
  if (steps < 2)
    throw InvalidGrid("grid needs at least 2 steps");
  if (refine_rounds < 0)
    throw InvalidGrid("refine_rounds must be >= 0");
}

GridSpec GridSpec::for_market(const MarketParams& params, const AdState& ad,
                              int steps, int refine_rounds) {
  params.validate();
  GridSpec grid;
  grid.lo = 0.0;
  grid.hi = std::max(2.0 * params.d_max / params.d, 1.2 * ad.ad_rev());
  grid.steps = steps;
  grid.refine_rounds = refine_rounds;
  grid.validate();
  return grid;
}

VerificationReport verify_ne(Model model, const StrategyProfile& profile,
                             const MarketParams& params, const AdState& ad,
                             const GridSpec& grid, double rel_tol) {
  grid.validate();
  check_tolerance(rel_tol);
  std::vector<MoverOutcome> outcomes;
  for (const Mover& m : stage_movers(model, profile, params, ad))
    outcomes.push_back(scan_mover(m, grid, grid.refine_rounds));
  return summarize(outcomes, rel_tol);
}

VerificationReport verify_spne(Model model, const StrategyProfile& profile,
                               const MarketParams& params, const AdState& ad,
                               const GridSpec& grid, double rel_tol) {
  if (model == Model::kPull)
    throw InvalidModel("pull has no sequential structure; use verify_ne");
  grid.validate();
  check_tolerance(rel_tol);
  std::vector<MoverOutcome> outcomes;
  for (const Mover& m : stage_movers(model, profile, params, ad))
    outcomes.push_back(scan_mover(m, grid, grid.refine_rounds));
  for (const Mover& m : leader_movers(model, profile, params, ad))
    outcomes.push_back(scan_mover(m, grid, grid.refine_rounds));
  return summarize(outcomes, rel_tol);
}

VerificationReport verify_equilibrium(Model model,
                                      const StrategyProfile& profile,
                                      const MarketParams& params,
                                      const AdState& ad, const GridSpec& grid,
                                      double rel_tol) {
  if (model == Model::kPull)
    return verify_ne(model, profile, params, ad, grid, rel_tol);
  return verify_spne(model, profile, params, ad, grid, rel_tol);
}

BruteForceResult brute_force_equilibria(Model model,
                                        const MarketParams& params,
                                        const AdState& ad,
                                        const GridSpec& grid, double rel_tol,
                                        std::uint64_t max_profiles) {
  grid.validate();
  check_tolerance(rel_tol);
  params.validate();
  const int dims = model == Model::kPull ? 3 : model == Model::kPush ? 2 : 1;
  const double total = std::pow(static_cast<double>(grid.steps), dims);
  if (total > static_cast<double>(max_profiles))
    throw GridTooLarge("brute-force grid exceeds the profile cap");

  BruteForceResult out;
  out.spacing = grid.spacing();
  std::vector<std::vector<double>> coords;

  auto consider = [&](const StrategyProfile& profile,
                      const std::vector<Mover>& movers,
                      std::vector<double> at) {
    if (demand(model, profile, params, ad) <= 0.0)
      return;
    if (!passes_on_grid(movers, grid, rel_tol))
      return;
    out.candidates.push_back(profile);
    coords.push_back(std::move(at));
  };

  const int n = grid.steps;
  switch (model) {
    case Model::kPull:
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          for (int k = 0; k < n; ++k) {
            const StrategyProfile p{grid.point(i),
                                    {grid.point(j), grid.point(k)}};
            consider(p, stage_movers(model, p, params, ad),
                     {p.p_i, p.eff.w, p.eff.c});
          }
        }
      }
      break;
    case Model::kPush:
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          const StrategyProfile p = with_followers(
              model, {grid.point(j), grid.point(k)}, params, ad);
          consider(p, leader_movers(model, p, params, ad),
                   {p.eff.w, p.eff.c});
        }
      }
      break;
    case Model::kHybrid:
      for (int k = 0; k < n; ++k) {
        const StrategyProfile p =
            with_followers(model, {0.0, grid.point(k)}, params, ad);
        consider(p, leader_movers(model, p, params, ad), {p.eff.c});
      }
      break;
  }

  // Tiny slack so neighbours two cells apart link despite rounding.
  out.clusters = cluster_points(coords, 2.0 * out.spacing * (1.0 + 1e-9));
  return out;
}

std::vector<std::vector<size_t>> cluster_points(
    const std::vector<std::vector<double>>& points, double radius) {
  const size_t n = points.size();
  std::vector<size_t> parent(n);
  std::iota(parent.begin(), parent.end(), size_t{0});
  std::function<size_t(size_t)> find = [&](size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  auto chebyshev = [&](size_t a, size_t b) {
    double dist = 0.0;
    for (size_t k = 0; k < points[a].size(); ++k)
      dist = std::max(dist, std::fabs(points[a][k] - points[b][k]));
    return dist;
  };
  for (size_t a = 0; a < n; ++a) {
    for (size_t b = a + 1; b < n; ++b) {
      if (chebyshev(a, b) <= radius)
        parent[find(a)] = find(b);
    }
  }

  std::vector<std::vector<size_t>> clusters;
  std::vector<long> slot(n, -1);
  for (size_t i = 0; i < n; ++i) {
    const size_t root = find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<long>(clusters.size());
      clusters.emplace_back();
    }
    clusters[static_cast<size_t>(slot[root])].push_back(i);
  }
  return clusters;
}

}  // namespace iotprice
