#pragma once

#include <cstdint>

namespace txallo {

/// Allocation hyperparameters.
struct AlloParams {
  /// Number of shards.
  std::uint32_t k = 1;
  /// Workload of a cross-shard transaction relative to an intra-shard one.
  double eta = 2.0;
  /// Per-shard processing capacity in intra-shard transaction units.
  double lambda = 1.0;
  /// Sweeps stop once a whole sweep gains less than this.
  double epsilon = 1e-5;
  /// Upper bound on optimisation sweeps.
  std::uint32_t max_sweeps = 100;

  /// Throws ParameterError on k < 1, eta < 1, lambda <= 0, epsilon <= 0 or
  /// max_sweeps < 1.
  void validate() const;

  /// lambda = tx_count / k and epsilon = 1e-5 * tx_count. A zero tx_count
  /// falls back to one transaction so the result is still valid.
  static AlloParams defaults_for(std::uint64_t tx_count, std::uint32_t k, double eta = 2.0);
};

inline constexpr double kDefaultEta = 2.0;
inline constexpr double kEpsilonPerTransaction = 1e-5;
inline constexpr std::uint32_t kDefaultMaxSweeps = 100;

}  // namespace txallo
