#include "txallo/txallo.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

#include "txallo/error.hpp"
#include "txallo/louvain.hpp"
#include "txallo/metrics.hpp"

namespace txallo {

namespace {

constexpr double kDriftLimit = 1e-8;

// Places an unassigned node in the connected shard with the best join gain,
// or the best of all shards when it has no assigned neighbor.
void place(const TransactionGraph& graph, Allocation& alloc, const AlloParams& params,
           NodeId node) {
  const NodeCommunityWeights weights = community_weights(graph, alloc, node);
  std::vector<ShardIndex> options = candidates(node, alloc, weights);
  if (options.empty()) {
    options.resize(alloc.shard_count());
    std::iota(options.begin(), options.end(), ShardIndex{0});
  }
  std::optional<ShardChange> best;
  for (ShardIndex q : options) {
    ShardChange c = join_gain(node, q, alloc, params, weights);
    if (!best || c.delta > best->delta) best = c;
  }
  apply_join(alloc, node, *best);
}

// One optimisation sweep over `nodes`; returns the throughput gained.
double sweep(const TransactionGraph& graph, Allocation& alloc, const AlloParams& params,
             std::span<const NodeId> nodes, const MoveObserver& observer) {
  double gained = 0.0;
  for (NodeId v : nodes) {
    const NodeCommunityWeights weights = community_weights(graph, alloc, v);
    const std::vector<ShardIndex> options = candidates(v, alloc, weights);
    if (options.empty()) continue;
    const ShardIndex p = alloc.shard_of(v);
    std::optional<MoveDelta> best;
    for (ShardIndex q : options) {
      MoveDelta d = move_gain(v, p, q, alloc, params, weights);
      if (!best || d.d_lambda > best->d_lambda) best = d;
    }
    if (best->d_lambda > 0.0) {
      apply_move(alloc, *best);
      gained += best->d_lambda;
      if (observer) observer(*best, alloc);
    }
  }
  return gained;
}

double cached_throughput(const Allocation& alloc, const AlloParams& params) {
  double total = 0.0;
  for (const ShardAggregates& agg : alloc.all_aggregates()) {
    total += capped_throughput(agg.lambda_hat(), agg.sigma(params.eta), params.lambda);
  }
  return total;
}

}  // namespace

GTxAlloResult g_txallo(const TransactionGraph& graph, const AlloParams& params,
                       const MoveObserver& observer) {
  params.validate();
  if (graph.empty()) throw DataError("g_txallo on an empty graph");

  const CommunityAssignment communities = louvain(graph);
  const std::uint32_t l = communities.community_count;

  // Rank communities by workload; ties go to the smaller label, which is the
  // community with the smaller first account.
  std::vector<ShardIndex> as_shards(communities.label.begin(), communities.label.end());
  const std::vector<ShardAggregates> community_agg = compute_aggregates(graph, as_shards, l);
  std::vector<std::uint32_t> ranked(l);
  std::iota(ranked.begin(), ranked.end(), 0u);
  std::stable_sort(ranked.begin(), ranked.end(), [&](std::uint32_t a, std::uint32_t b) {
    return community_agg[a].sigma(params.eta) > community_agg[b].sigma(params.eta);
  });
  std::vector<ShardIndex> shard_of_community(l, kUnassigned);
  for (std::uint32_t r = 0; r < std::min(l, params.k); ++r) {
    shard_of_community[ranked[r]] = static_cast<ShardIndex>(r);
  }

  GTxAlloResult result;
  result.louvain_communities = l;
  Allocation& alloc = result.allocation;
  alloc = Allocation(params.k, graph.node_count());
  for (NodeId v = 0; v < graph.node_count(); ++v) {
    alloc.set_shard(v, shard_of_community[communities.label[v]]);
  }
  alloc.recompute(graph);

  const std::vector<NodeId> order = graph.canonical_order();
  for (NodeId v : order) {
    if (!alloc.assigned(v)) place(graph, alloc, params, v);
  }

  while (result.sweeps < params.max_sweeps) {
    const double gained = sweep(graph, alloc, params, order, observer);
    result.history.push_back(gained);
    ++result.sweeps;
    if (alloc.drift(graph) > kDriftLimit) alloc.recompute(graph);
    if (gained < params.epsilon) break;
  }
  result.final_lambda = cached_throughput(alloc, params);
  return result;
}

EpochDelta make_epoch_delta(std::vector<Transaction> new_txs) {
  sort_canonical(new_txs);
  EpochDelta epoch;
  epoch.touched = touched_accounts(new_txs);
  epoch.new_txs = std::move(new_txs);
  return epoch;
}

Allocation a_txallo(const TransactionGraph& merged, Allocation prev, const EpochDelta& epoch,
                    const AlloParams& params, const MoveObserver& observer) {
  params.validate();
  if (prev.shard_count() != params.k) {
    throw ParameterError("previous allocation has a different shard count");
  }
  if (prev.node_count() > merged.node_count()) {
    throw StaleAllocation("previous allocation covers more nodes than the merged graph");
  }

  std::vector<NodeId> touched;
  touched.reserve(epoch.touched.size());
  for (const AccountId& a : epoch.touched) {
    const auto node = merged.find(a);
    if (!node) throw DataError("merged graph lacks epoch account " + a.to_hex());
    touched.push_back(*node);
  }

  // Bring the caches from the pre-merge graph up to the merged one.
  prev.grow(merged.node_count());
  const std::uint64_t expected = prev.synced_tx_count() + epoch.new_txs.size();
  if (!epoch.new_txs.empty() && expected == merged.tx_count()) {
    std::vector<ShardIndex> shards;
    for (const Transaction& tx : epoch.new_txs) {
      shards.clear();
      for (const AccountId& a : tx.accounts) shards.push_back(prev.shard_of(*merged.find(a)));
      if (shards.size() == 1) {
        prev.add_edge_weight(shards[0], shards[0], 1.0);
        continue;
      }
      const double w = 1.0 / static_cast<double>(pair_count(tx));
      for (std::size_t i = 0; i < shards.size(); ++i) {
        for (std::size_t j = i + 1; j < shards.size(); ++j) prev.add_edge_weight(shards[i], shards[j], w);
      }
    }
    prev.set_synced_tx_count(merged.tx_count());
  } else if (prev.synced_tx_count() != merged.tx_count()) {
    prev.recompute(merged);
  }

  std::vector<bool> is_touched(merged.node_count(), false);
  for (NodeId v : touched) is_touched[v] = true;
  for (NodeId v = 0; v < merged.node_count(); ++v) {
    if (!prev.assigned(v) && !is_touched[v]) {
      throw StaleAllocation("previous allocation misses account " + merged.account(v).to_hex());
    }
  }

  for (NodeId v : touched) {
    if (!prev.assigned(v)) place(merged, prev, params, v);
  }

  for (std::uint32_t sweeps = 0; sweeps < params.max_sweeps && !touched.empty(); ++sweeps) {
    if (sweep(merged, prev, params, touched, observer) < params.epsilon) break;
  }
  return prev;
}

}  // namespace txallo
