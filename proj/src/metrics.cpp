#include "txallo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "txallo/error.hpp"

namespace txallo {

namespace {

void require_cover(const TransactionGraph& graph, const Allocation& alloc) {
  if (alloc.node_count() < graph.node_count()) {
    throw UnmappedAccount(graph.account(static_cast<NodeId>(alloc.node_count())).to_hex());
  }
  for (NodeId v = 0; v < graph.node_count(); ++v) {
    if (!alloc.assigned(v)) throw UnmappedAccount(graph.account(v).to_hex());
  }
}

void require_shard(const Allocation& alloc, ShardIndex i) {
  if (i < 0 || static_cast<std::uint32_t>(i) >= alloc.shard_count()) {
    throw ParameterError("shard index " + std::to_string(i) + " out of range [0, " +
                         std::to_string(alloc.shard_count()) + ")");
  }
}

std::vector<ShardAggregates> fresh_aggregates(const TransactionGraph& graph,
                                              const Allocation& alloc) {
  require_cover(graph, alloc);
  return compute_aggregates(graph, alloc.assignment(), alloc.shard_count());
}

}  // namespace

double shard_workload(const TransactionGraph& graph, const Allocation& alloc,
                      const AlloParams& params, ShardIndex i) {
  require_shard(alloc, i);
  return fresh_aggregates(graph, alloc)[i].sigma(params.eta);
}

double gamma_graph(const TransactionGraph& graph, const Allocation& alloc) {
  require_cover(graph, alloc);
  double cross = 0.0;
  double total = 0.0;
  graph.for_each_edge([&](NodeId u, NodeId v, double w) {
    total += w;
    if (alloc.shard_of(u) != alloc.shard_of(v)) cross += w;
  });
  if (!(total > 0.0)) throw DataError("cross-shard ratio of a graph without edges");
  return cross / total;
}

double gamma_exact(std::span<const Transaction> txs, const TransactionGraph& graph,
                   const Allocation& alloc) {
  if (txs.empty()) throw DataError("cross-shard ratio of an empty transaction sequence");
  std::size_t cross = 0;
  for (const Transaction& tx : txs) {
    if (mu(tx, graph, alloc) > 1) ++cross;
  }
  return static_cast<double>(cross) / static_cast<double>(txs.size());
}

double balance(std::span<const double> sigmas) {
  if (sigmas.empty()) return 0.0;
  double mean = 0.0;
  for (double s : sigmas) mean += s;
  mean /= static_cast<double>(sigmas.size());
  double var = 0.0;
  for (double s : sigmas) var += (s - mean) * (s - mean);
  return std::sqrt(var / static_cast<double>(sigmas.size()));
}

double shard_throughput(const TransactionGraph& graph, const Allocation& alloc,
                        const AlloParams& params, ShardIndex i) {
  require_shard(alloc, i);
  const ShardAggregates agg = fresh_aggregates(graph, alloc)[i];
  return capped_throughput(agg.lambda_hat(), agg.sigma(params.eta), params.lambda);
}

double system_throughput(const TransactionGraph& graph, const Allocation& alloc,
                         const AlloParams& params) {
  double total = 0.0;
  for (const ShardAggregates& agg : fresh_aggregates(graph, alloc)) {
    total += capped_throughput(agg.lambda_hat(), agg.sigma(params.eta), params.lambda);
  }
  return total;
}

double shard_latency(double sigma, double lambda) {
  if (!(lambda > 0.0)) throw ParameterError("lambda must be > 0");
  if (sigma < 0.0) throw ParameterError("workload must be >= 0");
  const double load = sigma / lambda;
  if (load == 0.0) return 0.0;
  // Integral of ceil(x) over [0, load]: full unit steps 1..m, then the partial
  // step at height m + 1.
  const double m = std::ceil(load) - 1.0;
  return (m * (m + 1.0) / 2.0 + (load - m) * (m + 1.0)) / load;
}

SystemReport system_report(const TransactionGraph& graph, const Allocation& alloc,
                           const AlloParams& params,
                           std::optional<std::span<const Transaction>> txs) {
  params.validate();
  const auto aggregates = fresh_aggregates(graph, alloc);

  SystemReport report;
  report.shards.reserve(aggregates.size());
  std::vector<double> sigmas;
  sigmas.reserve(aggregates.size());
  for (const ShardAggregates& agg : aggregates) {
    ShardReport shard;
    shard.intra_weight = agg.intra;
    shard.cross_weight = agg.cross;
    shard.sigma = agg.sigma(params.eta);
    shard.throughput = capped_throughput(agg.lambda_hat(), shard.sigma, params.lambda);
    shard.latency = shard_latency(shard.sigma, params.lambda);
    report.throughput_total += shard.throughput;
    report.latency_mean += shard.latency;
    report.latency_worst = std::max(report.latency_worst, shard.latency);
    sigmas.push_back(shard.sigma);
    report.shards.push_back(shard);
  }
  report.latency_mean /= static_cast<double>(aggregates.size());
  report.throughput_normalized = report.throughput_total / params.lambda;
  report.rho = balance(sigmas);
  if (txs) {
    report.gamma = gamma_exact(*txs, graph, alloc);
    report.gamma_exact = true;
  } else {
    report.gamma = gamma_graph(graph, alloc);
  }
  return report;
}

}  // namespace txallo
