#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "txallo/error.hpp"
#include "txallo/louvain.hpp"

using namespace txallo;
using txallo::testing::account;

namespace {

Transaction tx(std::uint64_t a, std::uint64_t b) {
  return make_transaction(0, {account(a), account(b)});
}

void add_weighted(TransactionGraph& g, std::uint64_t a, std::uint64_t b, int copies) {
  for (int i = 0; i < copies; ++i) g.add_transaction(tx(a, b));
}

// Two 4-cliques of weight 100 joined by a single light edge. Scaling the
// bridge down to 1/100 of a clique edge matches a 0.01-weight bridge.
TransactionGraph two_cliques() {
  TransactionGraph g;
  for (std::uint64_t base : {0u, 4u}) {
    for (std::uint64_t i = 0; i < 4; ++i) {
      for (std::uint64_t j = i + 1; j < 4; ++j) add_weighted(g, base + i, base + j, 100);
    }
  }
  add_weighted(g, 3, 4, 1);
  return g;
}

std::uint64_t index_of(const TransactionGraph& g, NodeId v) {
  for (std::uint64_t i = 0;; ++i) {
    if (g.account(v) == account(i)) return i;
  }
}

}  // namespace

TEST_CASE("two cliques split into two communities") {
  const TransactionGraph g = two_cliques();
  const CommunityAssignment c = louvain(g);
  CHECK(c.community_count == 2);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const std::uint64_t i = index_of(g, v);
    CHECK(c.label[v] == (i < 4 ? 0u : 1u));
  }

  SUBCASE("and the split is the best two-way partition") {
    double best = -1.0;
    std::vector<std::uint32_t> label(8);
    for (unsigned mask = 0; mask < (1u << 8); ++mask) {
      for (NodeId v = 0; v < 8; ++v) label[v] = (mask >> v) & 1u;
      best = std::max(best, testing::oracle_modularity(g, label));
    }
    CHECK(modularity(g, c.label) == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("single edge and disconnected components") {
  TransactionGraph single;
  single.add_transaction(tx(1, 2));
  const CommunityAssignment one = louvain(single);
  CHECK(one.community_count == 1);

  TransactionGraph parts;
  for (std::uint64_t c = 0; c < 5; ++c) {
    add_weighted(parts, 10 * c, 10 * c + 1, 3);
    add_weighted(parts, 10 * c + 1, 10 * c + 2, 3);
    add_weighted(parts, 10 * c, 10 * c + 2, 3);
  }
  const CommunityAssignment split = louvain(parts);
  CHECK(split.community_count == 5);
  for (NodeId u = 0; u < parts.node_count(); ++u) {
    for (NodeId v = 0; v < parts.node_count(); ++v) {
      CHECK((split.label[u] == split.label[v]) == (index_of(parts, u) / 10 == index_of(parts, v) / 10));
    }
  }
}

TEST_CASE("labels are contiguous and numbered by first appearance") {
  std::mt19937_64 rng(31);
  const auto txs = testing::random_transactions(rng, 400, 80, 2, 4);
  const TransactionGraph g = build_graph(txs);
  const CommunityAssignment c = louvain(g);
  std::uint32_t next = 0;
  for (NodeId v : g.canonical_order()) {
    CHECK(c.label[v] <= next);
    if (c.label[v] == next) ++next;
  }
  CHECK(next == c.community_count);
}

TEST_CASE("property: deterministic and at least as good as singletons") {
  std::mt19937_64 rng(32);
  for (int round = 0; round < 15; ++round) {
    const auto txs = testing::random_transactions(rng, 200 + 20 * round, 60, 1, 5);
    const TransactionGraph g = build_graph(txs);
    const CommunityAssignment a = louvain(g);
    const CommunityAssignment b = louvain(build_graph(txs));
    CHECK(a.label == b.label);

    std::vector<std::uint32_t> singletons(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v) singletons[v] = v;
    const double q = modularity(g, a.label);
    CHECK(q >= modularity(g, singletons) - 1e-12);
    CHECK(q == doctest::Approx(testing::oracle_modularity(g, a.label)).epsilon(1e-10));
  }
}

TEST_CASE("modularity matches the dense definition on arbitrary labels") {
  std::mt19937_64 rng(33);
  for (int round = 0; round < 10; ++round) {
    const auto txs = testing::random_transactions(rng, 150, 30, 1, 4);
    const TransactionGraph g = build_graph(txs);
    std::vector<std::uint32_t> label(g.node_count());
    std::uniform_int_distribution<std::uint32_t> pick(0, 4);
    for (auto& l : label) l = pick(rng);
    CHECK(modularity(g, label) == doctest::Approx(testing::oracle_modularity(g, label)).epsilon(1e-12));
  }
}

TEST_CASE("empty graph is an error") {
  CHECK_THROWS_AS(louvain(TransactionGraph{}), DataError);
}
