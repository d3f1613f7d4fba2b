#pragma once

#include <utility>
#include <vector>

#include "txallo/allocation.hpp"
#include "txallo/graph.hpp"
#include "txallo/params.hpp"

namespace txallo {

/// Edge weight from one node into each shard.
struct NodeCommunityWeights {
  NodeId node = 0;
  /// Self-loop weight w_vv.
  double self_loop = 0.0;
  /// Weight to every other node, w_{v, V \ v}. Includes unassigned neighbors.
  double total_to_others = 0.0;
  /// (shard, w_{v, V_j}) for every shard with positive weight, ascending by
  /// shard. The node itself is excluded.
  std::vector<std::pair<ShardIndex, double>> to_shard;

  double to(ShardIndex shard) const;
};

NodeCommunityWeights community_weights(const TransactionGraph& graph, const Allocation& alloc,
                                       NodeId node);

/// Effect of one node joining or leaving one shard.
struct ShardChange {
  ShardIndex shard = kUnassigned;
  /// Capacity-bounded throughput after minus before.
  double delta = 0.0;
  double sigma_after = 0.0;
  double lambda_hat_after = 0.0;
  ShardAggregates before;
  ShardAggregates after;
};

struct MoveDelta {
  NodeId node = 0;
  ShardIndex from = kUnassigned;
  ShardIndex to = kUnassigned;
  /// Whole-system throughput gain; equals leave.delta + join.delta since no
  /// other shard is affected.
  double d_lambda = 0.0;
  ShardChange leave;
  ShardChange join;
};

/// Shards other than the node's own with positive weight from the node,
/// ascending. For an unassigned node every connected shard qualifies.
std::vector<ShardIndex> candidates(NodeId node, const Allocation& alloc,
                                   const NodeCommunityWeights& weights);

/// Throughput change of shard `q` if `node` joins it.
/// Throws ParameterError when q is out of range or the node is already in q.
ShardChange join_gain(NodeId node, ShardIndex q, const Allocation& alloc,
                      const AlloParams& params, const NodeCommunityWeights& weights);

/// Throughput change of shard `p` if `node` leaves it.
/// Throws ParameterError when the node is not in p.
ShardChange leave_gain(NodeId node, ShardIndex p, const Allocation& alloc,
                       const AlloParams& params, const NodeCommunityWeights& weights);

/// Combined leave/join gain for moving `node` from p to q.
/// Throws ParameterError when p == q or the node is not in p.
MoveDelta move_gain(NodeId node, ShardIndex p, ShardIndex q, const Allocation& alloc,
                    const AlloParams& params, const NodeCommunityWeights& weights);

/// Commits a move computed against the current state of `alloc`. Only the
/// caches of `from` and `to` change. Throws ParameterError for from == to and
/// StaleAllocation when the node is elsewhere or the caches moved by more
/// than 1e-6 relative since the delta was computed.
void apply_move(Allocation& alloc, const MoveDelta& delta);

/// Commits a join of an unassigned node.
void apply_join(Allocation& alloc, NodeId node, const ShardChange& join);

inline constexpr double kStaleTolerance = 1e-6;

}  // namespace txallo
