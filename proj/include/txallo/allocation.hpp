#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "txallo/graph.hpp"
#include "txallo/transaction.hpp"

namespace txallo {

using ShardIndex = std::int32_t;
inline constexpr ShardIndex kUnassigned = -1;

/// Per-shard edge-weight sums. `intra` counts edges with both endpoints in the
/// shard (self-loops included); `cross` counts edges with exactly one endpoint
/// in the shard. A node that is not yet assigned behaves as if it sat in a
/// shard of its own, so edges to it are cross weight.
struct ShardAggregates {
  double intra = 0.0;
  double cross = 0.0;

  /// Workload: intra + eta * cross.
  double sigma(double eta) const noexcept { return intra + eta * cross; }
  /// Throughput ignoring capacity: intra + cross / 2.
  double lambda_hat() const noexcept { return intra + cross / 2.0; }

  friend bool operator==(const ShardAggregates&, const ShardAggregates&) = default;
};

/// Account-to-shard mapping over the node indices of one TransactionGraph,
/// with cached per-shard aggregates.
///
/// The caches are only as current as the last call that touched them; use
/// recompute() or verify() after editing assignments directly.
class Allocation {
 public:
  Allocation() = default;
  Allocation(std::uint32_t k, std::size_t node_count);

  std::uint32_t shard_count() const noexcept { return k_; }
  std::size_t node_count() const noexcept { return shard_.size(); }

  ShardIndex shard_of(NodeId node) const { return shard_[node]; }
  bool assigned(NodeId node) const { return shard_[node] != kUnassigned; }
  bool complete() const;
  std::span<const ShardIndex> assignment() const noexcept { return shard_; }

  const ShardAggregates& aggregates(ShardIndex shard) const { return aggregates_[shard]; }
  std::span<const ShardAggregates> all_aggregates() const noexcept { return aggregates_; }
  double sigma(ShardIndex shard, double eta) const { return aggregates_[shard].sigma(eta); }
  double lambda_hat(ShardIndex shard) const { return aggregates_[shard].lambda_hat(); }

  /// Transaction count of the graph the caches describe.
  std::uint64_t synced_tx_count() const noexcept { return synced_tx_count_; }
  void set_synced_tx_count(std::uint64_t count) noexcept { synced_tx_count_ = count; }

  /// Appends unassigned entries up to `node_count`; never shrinks.
  void grow(std::size_t node_count);

  /// Raw edits that leave the caches untouched.
  void set_shard(NodeId node, ShardIndex shard);
  void set_aggregates(ShardIndex shard, const ShardAggregates& aggregates);

  /// Accounts for a new edge between nodes currently placed in `a` and `b`
  /// (either may be kUnassigned; a == b with a self-loop is intra weight).
  void add_edge_weight(ShardIndex a, ShardIndex b, double weight);

  /// Rebuilds every cache from `graph`.
  void recompute(const TransactionGraph& graph);

  /// Largest relative difference between the caches and a recomputation.
  double drift(const TransactionGraph& graph) const;

  /// account -> shard over assigned nodes.
  std::map<AccountId, ShardIndex> to_account_map(const TransactionGraph& graph) const;

  friend bool operator==(const Allocation&, const Allocation&) = default;

 private:
  std::uint32_t k_ = 0;
  std::vector<ShardIndex> shard_;
  std::vector<ShardAggregates> aggregates_;
  std::uint64_t synced_tx_count_ = 0;
};

/// From-scratch aggregates for `assignment` over `graph`, reduced in node order.
std::vector<ShardAggregates> compute_aggregates(const TransactionGraph& graph,
                                                std::span<const ShardIndex> assignment,
                                                std::uint32_t k);

/// Allocation for `graph` taken from an account map; caches recomputed.
/// Accounts of `graph` missing from `accounts` stay unassigned. Throws
/// ParameterError for a shard outside [0, k).
Allocation allocation_from_map(const TransactionGraph& graph,
                               const std::map<AccountId, ShardIndex>& accounts, std::uint32_t k);

/// Re-expresses `alloc` (over `source`) on the node indices of `target`.
/// Throws UnmappedAccount when a node of `target` has no shard in `source`.
Allocation reindex(const Allocation& alloc, const TransactionGraph& source,
                   const TransactionGraph& target);

/// Number of distinct shards touched by `tx`. Throws UnmappedAccount for an
/// account that `alloc` does not cover.
std::uint32_t mu(const Transaction& tx, const TransactionGraph& graph, const Allocation& alloc);

}  // namespace txallo
