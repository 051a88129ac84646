#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "iotprice/model.hpp"

namespace iotprice {

class EmptyPool : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Participation curve G(b) = m * max(0, 1 - b / b_max).
struct LinearParticipation {
  double m = 0.0;

  double operator()(double b, double b_max) const;
};

// Advertisers facing the IoTSP's per-volume price b. Firm i advertises
// `volume_per_firm` units per user whenever r_i >= b; total volume is capped
// at a_max. A pool without valuations but with `g_model` uses the functional
// curve instead.
struct AdvertiserPool {
  std::vector<double> valuations;
  double volume_per_firm = 1.0;
  double a_max = 0.0;
  double b_max = 0.0;
  std::optional<LinearParticipation> g_model;
  // Candidate prices evaluated for a functional pool (>= 2).
  int functional_grid_steps = 1001;

  bool is_functional() const { return valuations.empty() && g_model; }

  // Throws InvalidParameter unless every valuation is finite, >= 0 and
  // strictly below b_max (so nobody participates at b_max), a_max >= 0 and
  // volume_per_firm > 0. Throws EmptyPool when there are neither valuations
  // nor a functional curve.
  void validate() const;
};

struct BSelection {
  std::vector<double> maximizers;
  double achieved_ad_rev = 0.0;
  double payoff_at_max = 0.0;
};

// Relative tie tolerance when collecting maximizers of b * a1(b).
inline constexpr double kAdRevenueTieRelEps = 1e-12;

// Advertisement volume per user a1 at price b.
double participation(double b, const AdvertiserPool& pool);

// Candidate prices searched by optimal_b, ascending.
std::vector<double> candidate_prices(const AdvertiserPool& pool);

// IoTSP's payoff-maximising advertiser prices for the given model.
BSelection optimal_b(Model model, const AdvertiserPool& pool,
                     const MarketParams& params);

// Expected payoff of a firm with valuation r_i: (r_i - b) * demand when it
// participates (r_i >= b), else 0.
double advertiser_payoff(double r_i, double b, double demand);

double cloud_overhead(double a1, const MarketParams& params);

}  // namespace iotprice
