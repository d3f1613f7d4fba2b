#include <doctest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "txallo/baselines.hpp"
#include "txallo/error.hpp"
#include "txallo/metrics.hpp"
#include "txallo/replay.hpp"
#include "txallo/synthetic.hpp"

using namespace txallo;

namespace {

SyntheticSpec small_spec(std::uint64_t seed) {
  SyntheticSpec spec;
  spec.community_count = 5;
  spec.nodes_per_community = 50;
  spec.blocks = 200;
  spec.txs_per_block = 10;
  spec.seed = seed;
  return spec;
}

ReplayConfig config(std::uint32_t k, Policy policy) {
  ReplayConfig c;
  c.k = k;
  c.policy = policy;
  c.schedule.tau1 = 10;
  c.schedule.warmup_fraction = 0.5;
  c.record_timing = false;
  return c;
}

}  // namespace

TEST_CASE("schedule validation") {
  Schedule s;
  s.tau1 = 10;
  s.tau2 = 10;
  CHECK_THROWS_AS(s.validate(), ParameterError);
  s.tau2 = 25;
  CHECK_THROWS_AS(s.validate(), ParameterError);
  s.tau2 = 30;
  CHECK_NOTHROW(s.validate());
  s.tau1 = 0;
  CHECK_THROWS_AS(s.validate(), ParameterError);
  s = Schedule{};
  s.warmup_fraction = 1.0;
  CHECK_THROWS_AS(s.validate(), ParameterError);
  CHECK(parse_policy("hash") == Policy::hash);
  CHECK_THROWS_AS(parse_policy("random"), ParameterError);
}

TEST_CASE("invalid streams") {
  CHECK_THROWS_AS(replay({}, config(2, Policy::txallo)), DataError);
  auto txs = generate_synthetic(small_spec(1));
  std::swap(txs.front(), txs.back());
  CHECK_THROWS_AS(replay(txs, config(2, Policy::txallo)), DataError);
}

TEST_CASE("hash policy reproduces the stateless map every epoch") {
  const auto txs = generate_synthetic(small_spec(81));
  const ReplayResult r = replay(txs, config(4, Policy::hash));
  for (NodeId v = 0; v < r.graph.node_count(); ++v) {
    CHECK(r.allocation.shard_of(v) == hash_shard(r.graph.account(v), 4));
  }
  for (const EpochReport& e : r.reports) CHECK(e.algorithm == AlgorithmTag::baseline);
}

TEST_CASE("final graph equals the graph of the whole stream") {
  const auto txs = generate_synthetic(small_spec(82));
  const ReplayResult r = replay(txs, config(5, Policy::txallo));
  const TransactionGraph whole = build_graph(txs);
  CHECK(r.graph.tx_count() == whole.tx_count());
  CHECK(r.graph.node_count() == whole.node_count());
  const auto a = r.graph.edges();
  const auto b = whole.edges();
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].a == b[i].a);
    CHECK(a[i].b == b[i].b);
    CHECK(a[i].weight == doctest::Approx(b[i].weight).epsilon(1e-12));
  }
  CHECK(r.allocation.complete());
}

TEST_CASE("epoch layout") {
  const auto txs = generate_synthetic(small_spec(83));
  ReplayConfig c = config(5, Policy::txallo);
  c.schedule.tau2 = 30;
  const ReplayResult r = replay(txs, c);
  REQUIRE(!r.reports.empty());
  CHECK(r.reports.front().epoch_index == 0);
  CHECK(r.reports.front().algorithm == AlgorithmTag::global);
  // 100 warm-up blocks, then 10 windows of 10 blocks; refresh every third.
  std::size_t adaptive = 0, global = 0;
  for (std::size_t i = 1; i < r.reports.size(); ++i) {
    const EpochReport& e = r.reports[i];
    if (e.algorithm == AlgorithmTag::adaptive) {
      ++adaptive;
    } else {
      ++global;
      CHECK(e.epoch_index % 3 == 0);
      CHECK(r.reports[i - 1].epoch_index == e.epoch_index);
    }
    CHECK(e.runtime_ms == 0.0);
  }
  CHECK(adaptive == 10);
  CHECK(global == 3);
}

TEST_CASE("property: adaptive replay keeps up with hashing") {
  for (std::uint64_t seed : {84u, 85u, 86u}) {
    const auto txs = generate_synthetic(small_spec(seed));
    const ReplayResult adaptive = replay(txs, config(5, Policy::txallo));
    const ReplayResult hashed = replay(txs, config(5, Policy::hash));
    REQUIRE(adaptive.reports.size() == hashed.reports.size());
    for (std::size_t i = 0; i < adaptive.reports.size(); ++i) {
      CHECK(adaptive.reports[i].throughput_normalized >= hashed.reports[i].throughput_normalized - 1e-9);
    }
  }
}

TEST_CASE("replay is deterministic without timing") {
  const auto txs = generate_synthetic(small_spec(87));
  const ReplayResult a = replay(txs, config(3, Policy::txallo));
  const ReplayResult b = replay(txs, config(3, Policy::txallo));
  REQUIRE(a.reports.size() == b.reports.size());
  for (std::size_t i = 0; i < a.reports.size(); ++i) {
    CHECK(a.reports[i].gamma == b.reports[i].gamma);
    CHECK(a.reports[i].throughput_normalized == b.reports[i].throughput_normalized);
    CHECK(a.reports[i].latency_mean == b.reports[i].latency_mean);
  }
  CHECK(a.allocation == b.allocation);
}

TEST_CASE("synthetic generator") {
  SUBCASE("same spec, same stream; other seed, other stream") {
    CHECK(generate_synthetic(small_spec(1)) == generate_synthetic(small_spec(1)));
    CHECK(generate_synthetic(small_spec(1)) != generate_synthetic(small_spec(2)));
  }
  SUBCASE("shape") {
    const SyntheticSpec spec = small_spec(3);
    const auto txs = generate_synthetic(spec);
    CHECK(txs.size() == spec.blocks * spec.txs_per_block);
    CHECK(std::is_sorted(txs.begin(), txs.end(),
                         [](const Transaction& a, const Transaction& b) { return a.block < b.block; }));
    for (const Transaction& t : txs) {
      CHECK(t.accounts.size() >= 2);
      CHECK(t.accounts.size() <= 5);
    }
  }
  SUBCASE("no inter-community edges means zero cross ratio on the planted split") {
    SyntheticSpec spec = small_spec(4);
    spec.inter_edge_probability = 0.0;
    const auto txs = generate_synthetic(spec);
    const TransactionGraph g = build_graph(txs);
    std::map<AccountId, ShardIndex> planted;
    const std::uint64_t n = std::uint64_t{spec.community_count} * spec.nodes_per_community;
    for (std::uint64_t i = 0; i < n; ++i) {
      planted[synthetic_account(spec.seed, i)] = static_cast<ShardIndex>(planted_community(spec, i));
    }
    CHECK(gamma_graph(g, allocation_from_map(g, planted, spec.community_count)) == 0.0);
  }
  SUBCASE("skewed activity concentrates on a few accounts") {
    SyntheticSpec spec = small_spec(5);
    spec.activity_skew = 1.2;
    const auto txs = generate_synthetic(spec);
    std::map<AccountId, std::size_t> hits;
    std::size_t total = 0;
    for (const Transaction& t : txs) {
      for (const AccountId& a : t.accounts) {
        ++hits[a];
        ++total;
      }
    }
    std::vector<std::size_t> counts;
    for (const auto& [a, c] : hits) counts.push_back(c);
    std::sort(counts.rbegin(), counts.rend());
    std::size_t top = 0;
    const std::size_t n = std::max<std::size_t>(1, counts.size() / 100);
    for (std::size_t i = 0; i < n; ++i) top += counts[i];
    CHECK(static_cast<double>(top) / total > 0.10);
  }
  SUBCASE("invalid spec") {
    SyntheticSpec spec = small_spec(6);
    spec.community_count = 0;
    CHECK_THROWS_AS(generate_synthetic(spec), ParameterError);
  }
}
