#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "txallo/account.hpp"
#include "txallo/transaction.hpp"

namespace txallo {

/// Dense node index. Indices are assigned in first-appearance order and never
/// change when more transactions are merged in, so state keyed by NodeId
/// (allocations, community labels) survives graph growth.
using NodeId = std::uint32_t;

struct Neighbor {
  NodeId node;
  double weight;
};

/// Edge in canonical form: `a <= b` by account order, `a == b` for a self-loop.
struct Edge {
  AccountId a;
  AccountId b;
  double weight;
};

/// Undirected weighted transaction graph.
///
/// Every transaction spreads a total weight of one over the unordered pairs of
/// its accounts; a single-account transaction puts that weight on a self-loop.
/// Each unordered pair is stored once, so the sum of all edge weights equals
/// the transaction count.
class TransactionGraph {
 public:
  TransactionGraph() = default;

  /// Returns the node for `account`, creating an isolated node if needed.
  NodeId intern(const AccountId& account);
  std::optional<NodeId> find(const AccountId& account) const;
  const AccountId& account(NodeId node) const { return accounts_[node]; }

  std::size_t node_count() const noexcept { return accounts_.size(); }
  std::size_t edge_count() const noexcept { return slots_.size() + self_loop_count_; }
  std::uint64_t tx_count() const noexcept { return tx_count_; }
  bool empty() const noexcept { return accounts_.empty(); }

  /// Neighbors other than the node itself, in insertion order.
  std::span<const Neighbor> neighbors(NodeId node) const { return adjacency_[node]; }
  double self_loop(NodeId node) const { return self_loop_[node]; }

  /// Sum of all edge weights, self-loops once. Recomputed on each call.
  double total_weight() const;

  /// Adds `weight` to edge {a, b}; a == b targets the self-loop.
  void add_weight(NodeId a, NodeId b, double weight);

  void add_transaction(const Transaction& tx);

  /// Edge-wise addition of `delta`; node indices of this graph are preserved
  /// and new accounts are appended in `delta`'s node order.
  void absorb(const TransactionGraph& delta);

  /// All node ids sorted by account.
  std::vector<NodeId> canonical_order() const;

  /// All edges in canonical order, for comparison and export.
  std::vector<Edge> edges() const;

  /// Calls `fn(u, v, w)` once per stored edge, self-loops included (u == v).
  template <typename Fn>
  void for_each_edge(Fn&& fn) const {
    for (NodeId u = 0; u < accounts_.size(); ++u) {
      if (self_loop_[u] > 0.0) fn(u, u, self_loop_[u]);
      for (const Neighbor& n : adjacency_[u]) {
        if (u < n.node) fn(u, n.node, n.weight);
      }
    }
  }

 private:
  struct Slot {
    std::uint32_t in_low;   // position inside adjacency_[low]
    std::uint32_t in_high;  // position inside adjacency_[high]
  };

  std::vector<AccountId> accounts_;
  std::unordered_map<AccountId, NodeId> index_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::vector<double> self_loop_;
  std::unordered_map<std::uint64_t, Slot> slots_;
  std::size_t self_loop_count_ = 0;
  std::uint64_t tx_count_ = 0;
};

/// Graph of `txs`, accumulated after a stable sort by block height.
TransactionGraph build_graph(std::span<const Transaction> txs);

/// Edge-wise sum of two graphs; node order is `base` then new nodes of `delta`.
TransactionGraph merge_graph(const TransactionGraph& base, const TransactionGraph& delta);

}  // namespace txallo
