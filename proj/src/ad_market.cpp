#include "iotprice/ad_market.hpp"

#include <algorithm>
#include <cmath>

#include "iotprice/equilibrium.hpp"

namespace iotprice {

namespace {

// Ad revenue per user above which the IoTSP's equilibrium payoff no longer
// grows. Pull has no such level.
std::optional<double> saturation_revenue(Model model,
                                         const MarketParams& params) {
  switch (model) {
    case Model::kPush:
      return 5.0 * params.d_max / params.d;
    case Model::kHybrid:
      return 2.0 * params.d_max / params.d;
    case Model::kPull:
      return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

double LinearParticipation::operator()(double b, double b_max) const {
  return m * std::max(0.0, 1.0 - b / b_max);
}

void AdvertiserPool::validate() const {
  if (valuations.empty() && !g_model)
    throw EmptyPool("advertiser pool has no valuations and no g_model");
  if (!(std::isfinite(b_max) && b_max > 0.0))
    throw InvalidParameter("b_max must be > 0");
  if (!(std::isfinite(a_max) && a_max >= 0.0))
    throw InvalidParameter("a_max must be >= 0");
  if (!(std::isfinite(volume_per_firm) && volume_per_firm > 0.0))
    throw InvalidParameter("volume_per_firm must be > 0");
  for (double r : valuations) {
    if (!(std::isfinite(r) && r >= 0.0))
      throw InvalidParameter("valuations must be finite and >= 0");
    if (r >= b_max)
      throw InvalidParameter("every valuation must be below b_max");
  }
  if (g_model && !(std::isfinite(g_model->m) && g_model->m >= 0.0))
    throw InvalidParameter("g_model.m must be >= 0");
  if (is_functional() && functional_grid_steps < 2)
    throw InvalidParameter("functional_grid_steps must be >= 2");
}

double participation(double b, const AdvertiserPool& pool) {
  pool.validate();
  if (!(std::isfinite(b) && b >= 0.0))
    throw InvalidParameter("b must be finite and >= 0");
  if (pool.is_functional())
    return std::min(pool.a_max, (*pool.g_model)(b, pool.b_max));
  const auto firms = std::count_if(pool.valuations.begin(),
                                   pool.valuations.end(),
                                   [b](double r) { return r >= b; });
  return std::min(pool.a_max,
                  static_cast<double>(firms) * pool.volume_per_firm);
}

std::vector<double> candidate_prices(const AdvertiserPool& pool) {
  pool.validate();
  std::vector<double> out;
  if (pool.is_functional()) {
    const int n = pool.functional_grid_steps;
    out.reserve(n);
    for (int i = 0; i < n; ++i)
      out.push_back(pool.b_max * i / (n - 1));
    return out;
  }
  // b * a1(b) is piecewise linear and increasing between valuations, so its
  // maximum sits on a valuation.
  out = pool.valuations;
  out.push_back(0.0);
  out.push_back(pool.b_max);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

BSelection optimal_b(Model model, const AdvertiserPool& pool,
                     const MarketParams& params) {
  params.validate();
  const std::vector<double> candidates = candidate_prices(pool);

  std::vector<double> revenue(candidates.size());
  for (size_t i = 0; i < candidates.size(); ++i)
    revenue[i] = candidates[i] * participation(candidates[i], pool);
  const double best = *std::max_element(revenue.begin(), revenue.end());

  BSelection out;
  out.achieved_ad_rev = best;
  const std::optional<double> saturation = saturation_revenue(model, params);
  const bool saturated =
      saturation && best >= *saturation * (1.0 - kAdRevenueTieRelEps);
  for (size_t i = 0; i < candidates.size(); ++i) {
    const bool keep =
        saturated ? revenue[i] >= *saturation * (1.0 - kAdRevenueTieRelEps)
                  : detail::nearly_equal(revenue[i], best,
                                         kAdRevenueTieRelEps);
    if (keep)
      out.maximizers.push_back(candidates[i]);
  }

  const double b = out.maximizers.front();
  const AdState ad(b, participation(b, pool), params);
  out.payoff_at_max = equilibrium(model, params, ad).payoffs.u_iotsp;
  return out;
}

double advertiser_payoff(double r_i, double b, double demand) {
  if (r_i < b)
    return 0.0;
  return (r_i - b) * demand;
}

double cloud_overhead(double a1, const MarketParams& params) {
  if (!(a1 >= 0.0))
    throw InvalidParameter("a1 must be >= 0");
  return params.a2_model(a1);
}

}  // namespace iotprice
