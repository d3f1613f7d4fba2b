#pragma once

// Test-only reference computations. They work from account-keyed maps and
// the canonical edge list rather than the library's node-indexed caches.

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "txallo/account.hpp"
#include "txallo/allocation.hpp"
#include "txallo/graph.hpp"
#include "txallo/transaction.hpp"

namespace txallo::testing {

using ShardMap = std::map<AccountId, ShardIndex>;

AccountId account(std::uint64_t i);

/// Random transactions over `accounts` accounts; sizes drawn from
/// [min_size, max_size].
std::vector<Transaction> random_transactions(std::mt19937_64& rng, std::size_t count,
                                             std::uint64_t accounts, std::size_t min_size,
                                             std::size_t max_size);

ShardMap random_shards(std::mt19937_64& rng, const TransactionGraph& graph, std::uint32_t k);

ShardMap shard_map(const TransactionGraph& graph, const Allocation& alloc);

struct OracleShard {
  double intra = 0.0;
  double cross = 0.0;
};

/// Per-shard intra/cross weight by direct enumeration of the edge list.
std::vector<OracleShard> oracle_shards(const TransactionGraph& graph, const ShardMap& shards,
                                       std::uint32_t k);

/// Capacity-bounded throughput of each shard from scratch.
std::vector<double> oracle_throughputs(const TransactionGraph& graph, const ShardMap& shards,
                                       std::uint32_t k, double eta, double lambda);

double oracle_total_throughput(const TransactionGraph& graph, const ShardMap& shards,
                               std::uint32_t k, double eta, double lambda);

/// Midpoint quadrature of ceil(x) over [0, load], divided by load.
double oracle_latency_quadrature(double load, std::size_t steps = 2'000'000);

/// Weighted modularity straight from the definition, summing A_uv - k_u k_v / 2m
/// over every ordered node pair in the same community.
double oracle_modularity(const TransactionGraph& graph, const std::vector<std::uint32_t>& label);

bool near(double a, double b, double rel, double abs_floor = 1.0);

}  // namespace txallo::testing
