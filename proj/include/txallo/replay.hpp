#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "txallo/allocation.hpp"
#include "txallo/graph.hpp"
#include "txallo/transaction.hpp"

namespace txallo {

/// Replay cadence in blocks.
struct Schedule {
  /// Blocks per adaptive epoch.
  std::uint64_t tau1 = 300;
  /// Blocks between global refreshes; a multiple of tau1 larger than it.
  /// nullopt disables global refreshes.
  std::optional<std::uint64_t> tau2;
  /// Share of the block range used to build the initial allocation.
  double warmup_fraction = 0.9;

  void validate() const;
};

enum class Policy { txallo, hash };
enum class AlgorithmTag { adaptive, global, baseline };

std::string_view to_string(AlgorithmTag tag);
std::string_view to_string(Policy policy);
Policy parse_policy(std::string_view text);

struct ReplayConfig {
  std::uint32_t k = 1;
  double eta = 2.0;
  /// Allocation capacity; default is cumulative tx count / k at each run.
  std::optional<double> lambda;
  /// Convergence threshold; default is 1e-5 * cumulative tx count.
  std::optional<double> epsilon;
  /// Scoring capacity; default is epoch tx count / k.
  std::optional<double> score_lambda;
  std::uint32_t max_sweeps = 100;
  Schedule schedule;
  Policy policy = Policy::txallo;
  /// When false, runtime_ms is reported as 0 so outputs are reproducible.
  bool record_timing = true;
};

struct EpochReport {
  std::uint64_t epoch_index = 0;
  AlgorithmTag algorithm = AlgorithmTag::adaptive;
  double gamma = 0.0;
  double rho = 0.0;
  double throughput_normalized = 0.0;
  double latency_mean = 0.0;
  double runtime_ms = 0.0;
  std::uint64_t node_count = 0;
  std::uint64_t touched_count = 0;
};

struct ReplayResult {
  std::vector<EpochReport> reports;
  /// Cumulative graph and allocation at the end of the stream.
  TransactionGraph graph;
  Allocation allocation;
};

/// Replays a block-ordered stream.
///
/// The warm-up prefix builds the first graph and allocation (epoch 0). Every
/// following tau1-block window is merged into the graph, the allocation is
/// updated (adaptive run or hash extension), and the window's own
/// transactions are scored against it. When a window ends on a tau2 boundary
/// a global run on the cumulative graph replaces the allocation and is scored
/// on the same window as a separate report.
///
/// Throws DataError for an empty or unsorted stream and ParameterError for an
/// invalid schedule.
ReplayResult replay(std::span<const Transaction> txs, const ReplayConfig& config);

}  // namespace txallo
