#pragma once

#include <cstdint>
#include <vector>

#include "txallo/transaction.hpp"

namespace txallo {

/// Planted-community workload description.
struct SyntheticSpec {
  std::uint32_t community_count = 10;
  std::uint32_t nodes_per_community = 200;
  /// Relative odds that a further account of a transaction comes from the
  /// first account's community versus another community.
  double intra_edge_probability = 0.9;
  double inter_edge_probability = 0.1;
  /// Zipf exponent of account activity; 0 is uniform.
  double activity_skew = 0.0;
  std::uint64_t blocks = 100;
  std::uint32_t txs_per_block = 100;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Synthetic account identifier of node `index` under `seed`.
AccountId synthetic_account(std::uint64_t seed, std::uint64_t index);

/// Community of each account of the stream generated from `spec`, keyed by
/// node index (community = index / nodes_per_community).
inline std::uint32_t planted_community(const SyntheticSpec& spec, std::uint64_t index) {
  return static_cast<std::uint32_t>(index / spec.nodes_per_community);
}

/// Seeded stream in block order. Each transaction has 2 to 5 distinct
/// accounts (fewer only when communities are too small). The output depends
/// only on `spec`.
std::vector<Transaction> generate_synthetic(const SyntheticSpec& spec);

}  // namespace txallo
