#include "txallo/gain.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "txallo/error.hpp"
#include "txallo/metrics.hpp"

namespace txallo {

namespace {

void require_shard(const Allocation& alloc, ShardIndex s) {
  if (s < 0 || static_cast<std::uint32_t>(s) >= alloc.shard_count()) {
    throw ParameterError("shard index " + std::to_string(s) + " out of range [0, " +
                         std::to_string(alloc.shard_count()) + ")");
  }
}

bool close(double cached, double expected) {
  return std::abs(cached - expected) <= kStaleTolerance * std::max(1.0, std::abs(expected));
}

void require_fresh(const Allocation& alloc, const ShardChange& change) {
  const ShardAggregates& now = alloc.aggregates(change.shard);
  if (!close(now.intra, change.before.intra) || !close(now.cross, change.before.cross)) {
    throw StaleAllocation("shard " + std::to_string(change.shard) +
                          " changed since the gain was computed");
  }
}

}  // namespace

double NodeCommunityWeights::to(ShardIndex shard) const {
  auto it = std::lower_bound(to_shard.begin(), to_shard.end(), shard,
                             [](const auto& entry, ShardIndex s) { return entry.first < s; });
  return (it != to_shard.end() && it->first == shard) ? it->second : 0.0;
}

NodeCommunityWeights community_weights(const TransactionGraph& graph, const Allocation& alloc,
                                       NodeId node) {
  NodeCommunityWeights out;
  out.node = node;
  out.self_loop = graph.self_loop(node);
  std::vector<double> per_shard(alloc.shard_count(), 0.0);
  for (const Neighbor& n : graph.neighbors(node)) {
    out.total_to_others += n.weight;
    const ShardIndex s = alloc.shard_of(n.node);
    if (s != kUnassigned) per_shard[s] += n.weight;
  }
  for (std::uint32_t s = 0; s < per_shard.size(); ++s) {
    if (per_shard[s] > 0.0) out.to_shard.emplace_back(static_cast<ShardIndex>(s), per_shard[s]);
  }
  return out;
}

std::vector<ShardIndex> candidates(NodeId node, const Allocation& alloc,
                                   const NodeCommunityWeights& weights) {
  const ShardIndex own = alloc.shard_of(node);
  std::vector<ShardIndex> out;
  for (const auto& [shard, w] : weights.to_shard) {
    if (shard != own && w > 0.0) out.push_back(shard);
  }
  return out;
}

ShardChange join_gain(NodeId node, ShardIndex q, const Allocation& alloc,
                      const AlloParams& params, const NodeCommunityWeights& weights) {
  require_shard(alloc, q);
  if (alloc.shard_of(node) == q) throw ParameterError("node already belongs to the target shard");

  const double eta = params.eta;
  const double self = weights.self_loop;
  const double to_q = weights.to(q);
  // Weight to everything outside V_q except the node itself.
  const double to_rest = weights.total_to_others - to_q;

  ShardChange c;
  c.shard = q;
  c.before = alloc.aggregates(q);
  const double sigma = c.before.sigma(eta);
  const double lambda_hat = c.before.lambda_hat();
  c.sigma_after = sigma + self + eta * to_rest + (1.0 - eta) * to_q;
  c.lambda_hat_after = lambda_hat + self + weights.total_to_others / 2.0;
  c.after.intra = c.before.intra + self + to_q;
  c.after.cross = c.before.cross - to_q + to_rest;
  c.delta = capped_throughput(c.lambda_hat_after, c.sigma_after, params.lambda) -
            capped_throughput(lambda_hat, sigma, params.lambda);
  return c;
}

ShardChange leave_gain(NodeId node, ShardIndex p, const Allocation& alloc,
                       const AlloParams& params, const NodeCommunityWeights& weights) {
  require_shard(alloc, p);
  if (alloc.shard_of(node) != p) throw ParameterError("node does not belong to the source shard");

  const double eta = params.eta;
  const double self = weights.self_loop;
  const double to_p = weights.to(p);
  const double to_rest = weights.total_to_others - to_p;

  ShardChange c;
  c.shard = p;
  c.before = alloc.aggregates(p);
  const double sigma = c.before.sigma(eta);
  const double lambda_hat = c.before.lambda_hat();
  c.sigma_after = sigma - self - eta * to_rest + (eta - 1.0) * to_p;
  c.lambda_hat_after = lambda_hat - self - weights.total_to_others / 2.0;
  c.after.intra = c.before.intra - self - to_p;
  c.after.cross = c.before.cross - to_rest + to_p;
  c.delta = capped_throughput(c.lambda_hat_after, c.sigma_after, params.lambda) -
            capped_throughput(lambda_hat, sigma, params.lambda);
  return c;
}

MoveDelta move_gain(NodeId node, ShardIndex p, ShardIndex q, const Allocation& alloc,
                    const AlloParams& params, const NodeCommunityWeights& weights) {
  if (p == q) throw ParameterError("move requires distinct source and target shards");
  MoveDelta d;
  d.node = node;
  d.from = p;
  d.to = q;
  d.leave = leave_gain(node, p, alloc, params, weights);
  d.join = join_gain(node, q, alloc, params, weights);
  d.d_lambda = d.leave.delta + d.join.delta;
  return d;
}

void apply_move(Allocation& alloc, const MoveDelta& delta) {
  if (delta.from == delta.to) throw ParameterError("move requires distinct source and target shards");
  require_shard(alloc, delta.from);
  require_shard(alloc, delta.to);
  if (delta.node >= alloc.node_count() || alloc.shard_of(delta.node) != delta.from) {
    throw StaleAllocation("node is no longer in the move's source shard");
  }
  require_fresh(alloc, delta.leave);
  require_fresh(alloc, delta.join);
  alloc.set_aggregates(delta.from, delta.leave.after);
  alloc.set_aggregates(delta.to, delta.join.after);
  alloc.set_shard(delta.node, delta.to);
}

void apply_join(Allocation& alloc, NodeId node, const ShardChange& join) {
  require_shard(alloc, join.shard);
  if (node >= alloc.node_count() || alloc.assigned(node)) {
    throw StaleAllocation("join applies to unassigned nodes only");
  }
  require_fresh(alloc, join);
  alloc.set_aggregates(join.shard, join.after);
  alloc.set_shard(node, join.shard);
}

}  // namespace txallo
