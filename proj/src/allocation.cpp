#include "txallo/allocation.hpp"

#include <algorithm>
#include <cmath>

#include "txallo/error.hpp"

namespace txallo {

namespace {

void charge(std::vector<ShardAggregates>& agg, ShardIndex a, ShardIndex b, double w) {
  if (a == b) {
    if (a != kUnassigned) agg[a].intra += w;
    return;
  }
  if (a != kUnassigned) agg[a].cross += w;
  if (b != kUnassigned) agg[b].cross += w;
}

double relative_gap(double cached, double fresh) {
  return std::abs(cached - fresh) / std::max(1.0, std::abs(fresh));
}

}  // namespace

Allocation::Allocation(std::uint32_t k, std::size_t node_count)
    : k_(k), shard_(node_count, kUnassigned), aggregates_(k) {
  if (k < 1) throw ParameterError("shard count must be at least 1");
}

bool Allocation::complete() const {
  return std::none_of(shard_.begin(), shard_.end(),
                      [](ShardIndex s) { return s == kUnassigned; });
}

void Allocation::grow(std::size_t node_count) {
  if (node_count > shard_.size()) shard_.resize(node_count, kUnassigned);
}

void Allocation::set_shard(NodeId node, ShardIndex shard) {
  if (node >= shard_.size()) throw ParameterError("node index out of range");
  if (shard != kUnassigned && (shard < 0 || static_cast<std::uint32_t>(shard) >= k_)) {
    throw ParameterError("shard index out of range: " + std::to_string(shard));
  }
  shard_[node] = shard;
}

void Allocation::set_aggregates(ShardIndex shard, const ShardAggregates& aggregates) {
  aggregates_.at(static_cast<std::size_t>(shard)) = aggregates;
}

void Allocation::add_edge_weight(ShardIndex a, ShardIndex b, double weight) {
  charge(aggregates_, a, b, weight);
}

void Allocation::recompute(const TransactionGraph& graph) {
  if (graph.node_count() > shard_.size()) grow(graph.node_count());
  aggregates_ = compute_aggregates(graph, shard_, k_);
  synced_tx_count_ = graph.tx_count();
}

double Allocation::drift(const TransactionGraph& graph) const {
  const auto fresh = compute_aggregates(graph, shard_, k_);
  double worst = 0.0;
  for (std::uint32_t i = 0; i < k_; ++i) {
    worst = std::max(worst, relative_gap(aggregates_[i].intra, fresh[i].intra));
    worst = std::max(worst, relative_gap(aggregates_[i].cross, fresh[i].cross));
  }
  return worst;
}

std::map<AccountId, ShardIndex> Allocation::to_account_map(const TransactionGraph& graph) const {
  std::map<AccountId, ShardIndex> out;
  const std::size_t n = std::min(graph.node_count(), shard_.size());
  for (NodeId v = 0; v < n; ++v) {
    if (shard_[v] != kUnassigned) out.emplace(graph.account(v), shard_[v]);
  }
  return out;
}

std::vector<ShardAggregates> compute_aggregates(const TransactionGraph& graph,
                                                std::span<const ShardIndex> assignment,
                                                std::uint32_t k) {
  if (assignment.size() < graph.node_count()) {
    throw ParameterError("assignment shorter than the graph's node count");
  }
  std::vector<ShardAggregates> agg(k);
  graph.for_each_edge([&](NodeId u, NodeId v, double w) {
    charge(agg, assignment[u], assignment[v], w);
  });
  return agg;
}

Allocation allocation_from_map(const TransactionGraph& graph,
                               const std::map<AccountId, ShardIndex>& accounts, std::uint32_t k) {
  Allocation alloc(k, graph.node_count());
  for (NodeId v = 0; v < graph.node_count(); ++v) {
    auto it = accounts.find(graph.account(v));
    if (it != accounts.end()) alloc.set_shard(v, it->second);
  }
  alloc.recompute(graph);
  return alloc;
}

Allocation reindex(const Allocation& alloc, const TransactionGraph& source,
                   const TransactionGraph& target) {
  Allocation out(alloc.shard_count(), target.node_count());
  for (NodeId v = 0; v < target.node_count(); ++v) {
    const AccountId& account = target.account(v);
    const auto src = source.find(account);
    if (!src || *src >= alloc.node_count() || !alloc.assigned(*src)) {
      throw UnmappedAccount(account.to_hex());
    }
    out.set_shard(v, alloc.shard_of(*src));
  }
  out.recompute(target);
  return out;
}

std::uint32_t mu(const Transaction& tx, const TransactionGraph& graph, const Allocation& alloc) {
  std::vector<ShardIndex> shards;
  shards.reserve(tx.accounts.size());
  for (const AccountId& a : tx.accounts) {
    const auto node = graph.find(a);
    if (!node || *node >= alloc.node_count() || !alloc.assigned(*node)) {
      throw UnmappedAccount(a.to_hex());
    }
    shards.push_back(alloc.shard_of(*node));
  }
  std::sort(shards.begin(), shards.end());
  return static_cast<std::uint32_t>(std::unique(shards.begin(), shards.end()) - shards.begin());
}

}  // namespace txallo
