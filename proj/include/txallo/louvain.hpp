#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "txallo/graph.hpp"

namespace txallo {

struct CommunityAssignment {
  /// Community label per NodeId, contiguous in [0, community_count).
  std::vector<std::uint32_t> label;
  std::uint32_t community_count = 0;
};

/// Deterministic weighted Louvain (resolution 1).
///
/// Nodes are visited in account order at every level; aggregate nodes are
/// ordered by their smallest member. A node moves only on a strict modularity
/// improvement, and equal-gain targets resolve to the community with the
/// smallest member. Levels stop once a level gains at most 1e-7. Labels are
/// numbered by first appearance in account order.
///
/// Throws DataError on an empty graph.
CommunityAssignment louvain(const TransactionGraph& graph);

/// Weighted modularity of `label` over `graph`. A self-loop of weight w adds
/// 2w to its node's strength.
double modularity(const TransactionGraph& graph, std::span<const std::uint32_t> label);

inline constexpr double kLouvainMinGain = 1e-7;

}  // namespace txallo
