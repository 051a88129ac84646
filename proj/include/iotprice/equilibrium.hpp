#pragma once

#include "iotprice/hybrid.hpp"
#include "iotprice/model.hpp"
#include "iotprice/pull.hpp"
#include "iotprice/push.hpp"

namespace iotprice {

// Closed-form equilibrium of any model; `push_lambda` only affects push.
inline EquilibriumOutcome equilibrium(Model model, const MarketParams& params,
                                      const AdState& ad,
                                      double push_lambda = kDefaultPushLambda) {
  switch (model) {
    case Model::kPush:
      return push_spne(params, ad, push_lambda);
    case Model::kPull:
      return pull_ne(params, ad);
    case Model::kHybrid:
      return hybrid_spne(params, ad);
  }
  throw InvalidParameter("unknown model");
}

}  // namespace iotprice
