#include "txallo/replay.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "txallo/baselines.hpp"
#include "txallo/error.hpp"
#include "txallo/metrics.hpp"
#include "txallo/txallo.hpp"

namespace txallo {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

AlloParams allocation_params(const ReplayConfig& config, std::uint64_t tx_count) {
  AlloParams p = AlloParams::defaults_for(tx_count, config.k, config.eta);
  if (config.lambda) p.lambda = *config.lambda;
  if (config.epsilon) p.epsilon = *config.epsilon;
  p.max_sweeps = config.max_sweeps;
  return p;
}

EpochReport score(std::span<const Transaction> window, const TransactionGraph& graph,
                  const Allocation& alloc, const ReplayConfig& config) {
  const TransactionGraph local = build_graph(window);
  const Allocation local_alloc = reindex(alloc, graph, local);
  AlloParams p = AlloParams::defaults_for(window.size(), config.k, config.eta);
  if (config.score_lambda) p.lambda = *config.score_lambda;
  const SystemReport r = system_report(local, local_alloc, p, window);

  EpochReport out;
  out.gamma = r.gamma;
  out.rho = r.rho;
  out.throughput_normalized = r.throughput_normalized;
  out.latency_mean = r.latency_mean;
  out.node_count = graph.node_count();
  return out;
}

}  // namespace

void Schedule::validate() const {
  if (tau1 < 1) throw ParameterError("tau1 must be at least one block");
  if (tau2) {
    if (*tau2 <= tau1) throw ParameterError("tau2 must exceed tau1");
    if (*tau2 % tau1 != 0) throw ParameterError("tau2 must be a multiple of tau1");
  }
  if (!(warmup_fraction > 0.0 && warmup_fraction < 1.0)) {
    throw ParameterError("warm-up fraction must lie in (0, 1)");
  }
}

std::string_view to_string(AlgorithmTag tag) {
  switch (tag) {
    case AlgorithmTag::adaptive: return "adaptive";
    case AlgorithmTag::global: return "global";
    case AlgorithmTag::baseline: return "baseline";
  }
  return "unknown";
}

std::string_view to_string(Policy policy) {
  return policy == Policy::txallo ? "txallo" : "hash";
}

Policy parse_policy(std::string_view text) {
  if (text == "txallo") return Policy::txallo;
  if (text == "hash") return Policy::hash;
  throw ParameterError("unknown policy: " + std::string(text));
}

ReplayResult replay(std::span<const Transaction> txs, const ReplayConfig& config) {
  config.schedule.validate();
  if (config.k < 1) throw ParameterError("shard count must be at least 1");
  if (txs.empty()) throw DataError("replay of an empty stream");
  if (!std::is_sorted(txs.begin(), txs.end(),
                      [](const Transaction& a, const Transaction& b) { return a.block < b.block; })) {
    throw DataError("replay stream is not sorted by block");
  }

  const Schedule& schedule = config.schedule;
  const std::uint64_t first = txs.front().block;
  const std::uint64_t last = txs.back().block;
  const std::uint64_t span = last - first + 1;
  const std::uint64_t warm_blocks = std::max<std::uint64_t>(
      1, static_cast<std::uint64_t>(std::floor(schedule.warmup_fraction * static_cast<double>(span))));
  const std::uint64_t warm_end = first + warm_blocks;

  const auto block_begin = [&](std::uint64_t block) {
    return std::lower_bound(txs.begin(), txs.end(), block,
                            [](const Transaction& t, std::uint64_t b) { return t.block < b; });
  };

  ReplayResult result;
  const auto warm_stop = block_begin(warm_end);
  const std::span<const Transaction> warm(txs.begin(), warm_stop);
  if (warm.empty()) throw DataError("warm-up window holds no transactions");

  result.graph = build_graph(warm);
  const bool adaptive = config.policy == Policy::txallo;
  {
    const auto start = Clock::now();
    if (adaptive) {
      result.allocation =
          g_txallo(result.graph, allocation_params(config, result.graph.tx_count())).allocation;
    } else {
      result.allocation = hash_allocate(result.graph, config.k);
    }
    const double ms = config.record_timing ? elapsed_ms(start) : 0.0;
    EpochReport r = score(warm, result.graph, result.allocation, config);
    r.epoch_index = 0;
    r.algorithm = adaptive ? AlgorithmTag::global : AlgorithmTag::baseline;
    r.runtime_ms = ms;
    r.touched_count = result.graph.node_count();
    result.reports.push_back(r);
  }

  std::uint64_t epoch = 0;
  for (std::uint64_t begin = warm_end; begin <= last; begin += schedule.tau1) {
    ++epoch;
    const std::span<const Transaction> window(block_begin(begin), block_begin(begin + schedule.tau1));
    const bool refresh =
        adaptive && schedule.tau2 && (epoch * schedule.tau1) % *schedule.tau2 == 0;
    if (window.empty() && !refresh) continue;

    if (!window.empty()) {
      EpochDelta delta = make_epoch_delta({window.begin(), window.end()});
      const auto start = Clock::now();
      result.graph.absorb(build_graph(delta.new_txs));
      if (adaptive) {
        result.allocation = a_txallo(result.graph, std::move(result.allocation), delta,
                                     allocation_params(config, result.graph.tx_count()));
      } else {
        result.allocation = hash_allocate(result.graph, config.k);
      }
      const double ms = config.record_timing ? elapsed_ms(start) : 0.0;
      EpochReport r = score(window, result.graph, result.allocation, config);
      r.epoch_index = epoch;
      r.algorithm = adaptive ? AlgorithmTag::adaptive : AlgorithmTag::baseline;
      r.runtime_ms = ms;
      r.touched_count = delta.touched.size();
      result.reports.push_back(r);
    }

    if (refresh) {
      const auto start = Clock::now();
      result.allocation =
          g_txallo(result.graph, allocation_params(config, result.graph.tx_count())).allocation;
      const double ms = config.record_timing ? elapsed_ms(start) : 0.0;
      if (!window.empty()) {
        EpochReport r = score(window, result.graph, result.allocation, config);
        r.epoch_index = epoch;
        r.algorithm = AlgorithmTag::global;
        r.runtime_ms = ms;
        r.touched_count = result.graph.node_count();
        result.reports.push_back(r);
      }
    }
  }
  return result;
}

}  // namespace txallo
