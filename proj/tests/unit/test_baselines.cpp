#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "txallo/baselines.hpp"
#include "txallo/error.hpp"
#include "txallo/metrics.hpp"

using namespace txallo;
using txallo::testing::account;

TEST_CASE("sha256 known vectors") {
  auto hex = [](const Sha256Digest& d) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    for (std::uint8_t b : d) {
      out += digits[b >> 4];
      out += digits[b & 15];
    }
    return out;
  };
  CHECK(hex(sha256("")) == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(hex(sha256("abc")) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(hex(sha256(std::string(1, '\0'))) ==
        "6e340b9cffb37a989ca544e6bb780a2c78901d3fb33738768511a30617afa01d");
}

TEST_CASE("hash_shard") {
  const AccountId zero = *AccountId::from_hex("0x00");
  // Digest of the single byte 0x00, taken as a big-endian integer.
  CHECK(hash_shard(zero, 4) == 1);
  CHECK(hash_shard(zero, 7) == 2);
  CHECK(hash_shard(zero, 1) == 0);
  CHECK_THROWS_AS(hash_shard(zero, 0), ParameterError);
}

TEST_CASE("hash_allocate") {
  std::mt19937_64 rng(71);
  const auto txs = testing::random_transactions(rng, 500, 200, 1, 4);
  const TransactionGraph g = build_graph(txs);

  SUBCASE("k = 1") {
    const Allocation one = hash_allocate(g, 1);
    for (ShardIndex s : one.assignment()) CHECK(s == 0);
  }
  SUBCASE("matches the stateless map and has exact caches") {
    const Allocation a = hash_allocate(g, 5);
    for (NodeId v = 0; v < g.node_count(); ++v) CHECK(a.shard_of(v) == hash_shard(g.account(v), 5));
    CHECK(a.drift(g) == 0.0);
  }
  SUBCASE("invalid k") { CHECK_THROWS_AS(hash_allocate(g, 0), ParameterError); }
}

TEST_CASE("property: hash placement is close to uniform") {
  const std::uint32_t k = 8;
  const std::size_t n = 16000;
  std::vector<double> counts(k, 0.0);
  for (std::uint64_t i = 0; i < n; ++i) counts[hash_shard(account(i), k)] += 1.0;
  double chi2 = 0.0;
  const double expected = static_cast<double>(n) / k;
  for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;
  // 7 degrees of freedom; 24.32 is the 0.999 quantile.
  CHECK(chi2 < 24.32);
}

TEST_CASE("property: random two-account traffic crosses shards at about 1 - 1/k") {
  std::mt19937_64 rng(72);
  const auto txs = testing::random_transactions(rng, 20000, 5000, 2, 2);
  const TransactionGraph g = build_graph(txs);
  for (std::uint32_t k : {2u, 4u, 16u}) {
    const double gamma = gamma_graph(g, hash_allocate(g, k));
    CHECK(std::abs(gamma - (1.0 - 1.0 / k)) < 0.02);
  }
}
