#include "txallo/graph.hpp"

#include <algorithm>
#include <numeric>

#include "txallo/error.hpp"

namespace txallo {

namespace {

std::uint64_t pair_key(NodeId low, NodeId high) {
  return (static_cast<std::uint64_t>(low) << 32) | high;
}

}  // namespace

NodeId TransactionGraph::intern(const AccountId& account) {
  auto [it, inserted] = index_.try_emplace(account, static_cast<NodeId>(accounts_.size()));
  if (inserted) {
    accounts_.push_back(account);
    adjacency_.emplace_back();
    self_loop_.push_back(0.0);
  }
  return it->second;
}

std::optional<NodeId> TransactionGraph::find(const AccountId& account) const {
  auto it = index_.find(account);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double TransactionGraph::total_weight() const {
  double total = 0.0;
  for_each_edge([&](NodeId, NodeId, double w) { total += w; });
  return total;
}

void TransactionGraph::add_weight(NodeId a, NodeId b, double weight) {
  if (a >= accounts_.size() || b >= accounts_.size()) {
    throw ParameterError("add_weight: node index out of range");
  }
  if (!(weight > 0.0)) return;
  if (a == b) {
    if (self_loop_[a] == 0.0) ++self_loop_count_;
    self_loop_[a] += weight;
    return;
  }
  const NodeId low = std::min(a, b);
  const NodeId high = std::max(a, b);
  auto [it, inserted] = slots_.try_emplace(pair_key(low, high));
  if (inserted) {
    it->second.in_low = static_cast<std::uint32_t>(adjacency_[low].size());
    it->second.in_high = static_cast<std::uint32_t>(adjacency_[high].size());
    adjacency_[low].push_back({high, weight});
    adjacency_[high].push_back({low, weight});
    return;
  }
  adjacency_[low][it->second.in_low].weight += weight;
  adjacency_[high][it->second.in_high].weight += weight;
}

void TransactionGraph::add_transaction(const Transaction& tx) {
  if (tx.accounts.empty()) throw DataError("transaction without accounts");
  std::vector<NodeId> nodes;
  nodes.reserve(tx.accounts.size());
  for (const AccountId& a : tx.accounts) nodes.push_back(intern(a));

  if (nodes.size() == 1) {
    add_weight(nodes[0], nodes[0], 1.0);
  } else {
    const double w = 1.0 / static_cast<double>(pair_count(tx));
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      for (std::size_t j = i + 1; j < nodes.size(); ++j) add_weight(nodes[i], nodes[j], w);
    }
  }
  ++tx_count_;
}

void TransactionGraph::absorb(const TransactionGraph& delta) {
  std::vector<NodeId> remap(delta.node_count());
  for (NodeId v = 0; v < delta.node_count(); ++v) remap[v] = intern(delta.account(v));
  delta.for_each_edge([&](NodeId u, NodeId v, double w) { add_weight(remap[u], remap[v], w); });
  tx_count_ += delta.tx_count_;
}

std::vector<NodeId> TransactionGraph::canonical_order() const {
  std::vector<NodeId> order(accounts_.size());
  std::iota(order.begin(), order.end(), NodeId{0});
  std::sort(order.begin(), order.end(),
            [&](NodeId a, NodeId b) { return accounts_[a] < accounts_[b]; });
  return order;
}

std::vector<Edge> TransactionGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for_each_edge([&](NodeId u, NodeId v, double w) {
    const AccountId& a = accounts_[u];
    const AccountId& b = accounts_[v];
    if (b < a) {
      out.push_back({b, a, w});
    } else {
      out.push_back({a, b, w});
    }
  });
  std::sort(out.begin(), out.end(), [](const Edge& x, const Edge& y) {
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  });
  return out;
}

TransactionGraph build_graph(std::span<const Transaction> txs) {
  std::vector<Transaction> sorted(txs.begin(), txs.end());
  sort_canonical(sorted);
  TransactionGraph graph;
  for (const Transaction& tx : sorted) graph.add_transaction(tx);
  return graph;
}

TransactionGraph merge_graph(const TransactionGraph& base, const TransactionGraph& delta) {
  TransactionGraph merged = base;
  merged.absorb(delta);
  return merged;
}

}  // namespace txallo
