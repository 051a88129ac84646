#pragma once

#include <cstdint>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "iotprice/model.hpp"

namespace iotprice {

// Brute-force ground truth for the closed-form equilibria: every check scans
// a provider's price over a grid while the other prices stay fixed (or, for
// leaders, while followers re-respond) and reports the largest improvement.

class InvalidGrid : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidModel : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class GridTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Provider { kIotsp, kWsp, kCsp };

std::string_view to_string(Provider provider);

// Deviation grid shared by every decision variable, in effective-payment
// units (and currency for p_i).
struct GridSpec {
  double lo = 0.0;
  double hi = 0.0;
  int steps = 2001;
  int refine_rounds = 3;

  void validate() const;
  double spacing() const { return (hi - lo) / (steps - 1); }
  double point(int i) const { return lo + (hi - lo) * i / (steps - 1); }

  // [0, max(2 d_max / d, 1.2 ba1)].
  static GridSpec for_market(const MarketParams& params, const AdState& ad,
                             int steps = 2001, int refine_rounds = 3);
};

inline constexpr double kDefaultRelTolerance = 1e-6;

struct VerificationReport {
  // passed <=> max_gain <= tolerance.
  bool passed = true;
  // Improvement found by worst_deviator (>= 0); the deviator is the one with
  // the largest gain relative to its own payoff scale.
  double max_gain = 0.0;
  double relative_gain = 0.0;
  Provider worst_deviator = Provider::kIotsp;
  double worst_deviation = 0.0;
  // rel_tol * max(1, |equilibrium payoff of worst_deviator|).
  double tolerance = 0.0;
};

// Unilateral-deviation check of the simultaneous stage: all three providers
// for pull, the IoTSP for push (at fixed w, c), the IoTSP and WSP for hybrid
// (at fixed c).
VerificationReport verify_ne(Model model, const StrategyProfile& profile,
                             const MarketParams& params, const AdState& ad,
                             const GridSpec& grid,
                             double rel_tol = kDefaultRelTolerance);

// Subgame-perfection check for the sequential models: the follower stage at
// `profile` via verify_ne, plus every leader deviation with followers
// re-responding analytically. Throws InvalidModel for pull.
VerificationReport verify_spne(Model model, const StrategyProfile& profile,
                               const MarketParams& params, const AdState& ad,
                               const GridSpec& grid,
                               double rel_tol = kDefaultRelTolerance);

// Closed-form equilibrium check: verify_ne for pull, verify_spne otherwise.
VerificationReport verify_equilibrium(Model model,
                                      const StrategyProfile& profile,
                                      const MarketParams& params,
                                      const AdState& ad, const GridSpec& grid,
                                      double rel_tol = kDefaultRelTolerance);

struct BruteForceResult {
  // Grid profiles with positive demand from which no mover gains more than
  // the tolerance by switching to another grid price.
  std::vector<StrategyProfile> candidates;
  // Single-linkage clusters (indices into candidates), radius 2 grid cells.
  std::vector<std::vector<size_t>> clusters;
  double spacing = 0.0;
};

inline constexpr std::uint64_t kDefaultMaxEvaluations = 50'000'000;

// Exhaustive search of the grid-restricted game. Enumerates (p_i, w, c) for
// pull, leader pairs (w, c) for push and c for hybrid; followers respond
// analytically. Refinement is not used: deviations stay on the grid. Throws
// GridTooLarge when steps^movers exceeds max_profiles.
BruteForceResult brute_force_equilibria(
    Model model, const MarketParams& params, const AdState& ad,
    const GridSpec& grid, double rel_tol = 1e-9,
    std::uint64_t max_profiles = kDefaultMaxEvaluations);

// Single-linkage clustering under the Chebyshev metric.
std::vector<std::vector<size_t>> cluster_points(
    const std::vector<std::vector<double>>& points, double radius);

}  // namespace iotprice
