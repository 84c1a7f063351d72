#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "beesynth/search.hpp"

namespace beesynth {

/// A rule plus 1-based indices into the sorted cost list C. Terminal states
/// have no indices.
struct CostTupleState {
  RuleId rule = 0;
  std::vector<std::uint32_t> indices;
  double w = 0.0;
};

/// rule_cost + sum of C[i]; +infinity while any index is past the end of C.
double state_cost(double rule_cost, std::span<const std::uint32_t> indices, std::span<const double> costs);

/// The k successors of a non-terminal state, the j-th with indices[j] + 1.
std::vector<CostTupleState> expand_cost_tuple(const CostTupleState& n, double rule_cost, std::span<const double> costs);

}  // namespace beesynth
