#pragma once

#include <optional>
#include <span>
#include <vector>

#include "txallo/allocation.hpp"
#include "txallo/graph.hpp"
#include "txallo/params.hpp"
#include "txallo/transaction.hpp"

namespace txallo {

// Every function here recomputes from the graph and ignores the allocation's
// caches, so the results can serve as an oracle for them. The allocation must
// cover every node of the graph.

struct ShardReport {
  double sigma = 0.0;
  double throughput = 0.0;
  double latency = 0.0;
  double intra_weight = 0.0;
  double cross_weight = 0.0;
};

struct SystemReport {
  double gamma = 0.0;
  bool gamma_exact = false;  // transaction-level when true, graph-level otherwise
  double rho = 0.0;
  double throughput_total = 0.0;
  double throughput_normalized = 0.0;
  double latency_mean = 0.0;
  double latency_worst = 0.0;
  std::vector<ShardReport> shards;
};

/// Capacity-bounded throughput: `lambda_hat` when `sigma <= lambda`, else
/// scaled by lambda / sigma.
inline double capped_throughput(double lambda_hat, double sigma, double lambda) noexcept {
  return sigma <= lambda ? lambda_hat : (lambda / sigma) * lambda_hat;
}

/// sigma_i = intra_i + eta * cross_i. Throws ParameterError when i >= k.
double shard_workload(const TransactionGraph& graph, const Allocation& alloc,
                      const AlloParams& params, ShardIndex i);

/// Cross-shard share of the total edge weight. Throws DataError on a graph
/// with zero total weight.
double gamma_graph(const TransactionGraph& graph, const Allocation& alloc);

/// Fraction of transactions touching more than one shard. Throws DataError
/// on an empty sequence and UnmappedAccount for uncovered accounts.
double gamma_exact(std::span<const Transaction> txs, const TransactionGraph& graph,
                   const Allocation& alloc);

/// Population standard deviation of the shard workloads.
double balance(std::span<const double> sigmas);

/// Capacity-bounded throughput of shard i.
double shard_throughput(const TransactionGraph& graph, const Allocation& alloc,
                        const AlloParams& params, ShardIndex i);

/// Overall capacity-bounded throughput, reduced in shard order.
double system_throughput(const TransactionGraph& graph, const Allocation& alloc,
                         const AlloParams& params);

/// Mean confirmation latency of a shard with workload `sigma`, in block
/// units: the integral of ceil(x) over [0, sigma/lambda] divided by
/// sigma/lambda. Zero for an empty shard. Throws ParameterError when
/// lambda <= 0 or sigma < 0.
double shard_latency(double sigma, double lambda);

/// All metrics at once. `txs`, when given, selects the transaction-level
/// cross-shard ratio.
SystemReport system_report(const TransactionGraph& graph, const Allocation& alloc,
                           const AlloParams& params,
                           std::optional<std::span<const Transaction>> txs = std::nullopt);

}  // namespace txallo
