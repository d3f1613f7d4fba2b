#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "txallo/allocation.hpp"
#include "txallo/error.hpp"
#include "txallo/graph.hpp"

using namespace txallo;
using txallo::testing::account;

namespace {

Transaction tx(std::uint64_t block, std::initializer_list<std::uint64_t> ids) {
  std::vector<AccountId> accounts;
  for (auto i : ids) accounts.push_back(account(i));
  return make_transaction(block, std::move(accounts));
}

bool same_edges(const TransactionGraph& a, const TransactionGraph& b, double tol) {
  const auto ea = a.edges();
  const auto eb = b.edges();
  if (ea.size() != eb.size()) return false;
  for (std::size_t i = 0; i < ea.size(); ++i) {
    if (ea[i].a != eb[i].a || ea[i].b != eb[i].b) return false;
    if (std::abs(ea[i].weight - eb[i].weight) > tol) return false;
  }
  return a.tx_count() == b.tx_count() && a.node_count() == b.node_count();
}

}  // namespace

TEST_CASE("account ids parse hex and order by raw bytes") {
  const auto a = AccountId::from_hex("0xA");
  const auto b = AccountId::from_hex("0a");
  REQUIRE(a);
  REQUIRE(b);
  CHECK(*a == *b);
  CHECK(a->to_hex() == "0x0a");
  CHECK(AccountId::from_hex("0xABcd")->to_hex() == "0xabcd");
  CHECK_FALSE(AccountId::from_hex("0x"));
  CHECK_FALSE(AccountId::from_hex(""));
  CHECK_FALSE(AccountId::from_hex("0xzz"));
  // 0x7f < 0x80 < 0xff as unsigned bytes.
  CHECK(*AccountId::from_hex("7f") < *AccountId::from_hex("80"));
  CHECK(*AccountId::from_hex("80") < *AccountId::from_hex("ff"));
  CHECK(*AccountId::from_hex("01") < *AccountId::from_hex("0100"));
  CHECK_THROWS_AS(AccountId(std::string{}), ParameterError);
}

TEST_CASE("transactions are deduplicated and must be non-empty") {
  const Transaction t = tx(3, {5, 1, 5, 2});
  CHECK(t.accounts.size() == 3);
  CHECK(std::is_sorted(t.accounts.begin(), t.accounts.end()));
  CHECK_THROWS_AS(make_transaction(0, {}), DataError);
}

TEST_CASE("pair_count") {
  CHECK(pair_count(tx(0, {1, 2})) == 1);
  CHECK(pair_count(tx(0, {1, 2, 3, 4})) == 6);
  CHECK(pair_count(tx(0, {1})) == 1);
}

TEST_CASE("build_graph spreads unit weight per transaction") {
  SUBCASE("three accounts") {
    const std::vector<Transaction> txs{tx(0, {1, 2, 3})};
    const TransactionGraph g = build_graph(txs);
    const auto edges = g.edges();
    REQUIRE(edges.size() == 3);
    for (const Edge& e : edges) CHECK(e.weight == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  }
  SUBCASE("repeated pair accumulates") {
    const std::vector<Transaction> txs{tx(0, {1, 2}), tx(1, {2, 1})};
    const TransactionGraph g = build_graph(txs);
    REQUIRE(g.edges().size() == 1);
    CHECK(g.edges()[0].weight == 2.0);
  }
  SUBCASE("single account is a self-loop") {
    const std::vector<Transaction> txs{tx(0, {1})};
    const TransactionGraph g = build_graph(txs);
    REQUIRE(g.edges().size() == 1);
    CHECK(g.edges()[0].a == g.edges()[0].b);
    CHECK(g.self_loop(0) == 1.0);
    CHECK(g.total_weight() == 1.0);
    CHECK(g.tx_count() == 1);
  }
}

TEST_CASE("property: total weight equals transaction count") {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 20; ++round) {
    const auto txs = testing::random_transactions(rng, 500, 80, 1, 6);
    const TransactionGraph g = build_graph(txs);
    CHECK(testing::near(g.total_weight(), 500.0, 1e-6));
  }
}

TEST_CASE("property: build_graph is order independent") {
  std::mt19937_64 rng(12);
  for (int round = 0; round < 10; ++round) {
    auto txs = testing::random_transactions(rng, 300, 40, 1, 5);
    const TransactionGraph reference = build_graph(txs);
    std::shuffle(txs.begin(), txs.end(), rng);
    for (Transaction& t : txs) t.block = 0;
    CHECK(same_edges(reference, build_graph(txs), 1e-9));
  }
}

TEST_CASE("merge_graph") {
  std::mt19937_64 rng(13);
  const auto t1 = testing::random_transactions(rng, 200, 50, 1, 5);
  const auto t2 = testing::random_transactions(rng, 150, 70, 1, 5);
  const auto t3 = testing::random_transactions(rng, 100, 30, 1, 5);
  const TransactionGraph g1 = build_graph(t1);
  const TransactionGraph g2 = build_graph(t2);
  const TransactionGraph g3 = build_graph(t3);
  const TransactionGraph empty;

  SUBCASE("empty is an identity") {
    CHECK(same_edges(merge_graph(g1, empty), g1, 0.0));
    CHECK(same_edges(merge_graph(empty, g1), g1, 0.0));
  }
  SUBCASE("matches the graph of the concatenated stream") {
    std::vector<Transaction> joined = t1;
    for (Transaction t : t2) {
      t.block += 1000;
      joined.push_back(t);
    }
    CHECK(same_edges(merge_graph(g1, g2), build_graph(joined), 1e-9));
  }
  SUBCASE("associative and commutative on weights") {
    CHECK(same_edges(merge_graph(g1, g2), merge_graph(g2, g1), 1e-9));
    CHECK(same_edges(merge_graph(merge_graph(g1, g2), g3), merge_graph(g1, merge_graph(g2, g3)),
                     1e-9));
  }
  SUBCASE("node ids of the base are preserved") {
    const TransactionGraph merged = merge_graph(g1, g2);
    for (NodeId v = 0; v < g1.node_count(); ++v) CHECK(merged.account(v) == g1.account(v));
  }
}

TEST_CASE("mu counts distinct shards") {
  const std::vector<Transaction> txs{tx(0, {1, 2, 3, 4})};
  const TransactionGraph g = build_graph(txs);
  auto alloc_for = [&](std::map<std::uint64_t, ShardIndex> s, std::uint32_t k) {
    std::map<AccountId, ShardIndex> m;
    for (auto [i, shard] : s) m[account(i)] = shard;
    return allocation_from_map(g, m, k);
  };
  CHECK(mu(tx(0, {1, 2}), g, alloc_for({{1, 3}, {2, 3}, {3, 3}, {4, 3}}, 8)) == 1);
  CHECK(mu(tx(0, {1, 2, 3}), g, alloc_for({{1, 0}, {2, 0}, {3, 5}, {4, 0}}, 8)) == 2);
  CHECK(mu(tx(0, {1, 2, 3, 4}), g, alloc_for({{1, 0}, {2, 1}, {3, 2}, {4, 3}}, 8)) == 4);

  const Allocation partial = alloc_for({{1, 0}, {2, 0}}, 2);
  try {
    (void)mu(tx(0, {1, 3}), g, partial);
    FAIL("expected UnmappedAccount");
  } catch (const UnmappedAccount& e) {
    CHECK(e.account() == account(3).to_hex());
  }
}

TEST_CASE("property: 1 <= mu <= min(|A|, k)") {
  std::mt19937_64 rng(14);
  const auto txs = testing::random_transactions(rng, 400, 60, 1, 6);
  const TransactionGraph g = build_graph(txs);
  for (std::uint32_t k : {1u, 2u, 3u, 7u}) {
    const Allocation alloc = allocation_from_map(g, testing::random_shards(rng, g, k), k);
    for (const Transaction& t : txs) {
      const auto m = mu(t, g, alloc);
      CHECK(m >= 1);
      CHECK(m <= std::min<std::size_t>(t.accounts.size(), k));
    }
  }
}
