#include "txallo/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "txallo/error.hpp"

namespace txallo {

namespace {

// Murmur3 finaliser; a bijection on 64-bit values.
std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  x *= 0xc4ceb9fe1a85ec53ULL;
  x ^= x >> 33;
  return x;
}

// The std distributions are implementation-defined; these keep streams
// identical across standard libraries.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % n;
}

// Index drawn proportionally to the weights behind `cumulative`.
std::size_t draw(std::mt19937_64& rng, const std::vector<double>& cumulative) {
  const double target = uniform01(rng) * cumulative.back();
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
  return std::min<std::size_t>(it - cumulative.begin(), cumulative.size() - 1);
}

std::size_t draw_size(std::mt19937_64& rng) {
  const double u = uniform01(rng);
  if (u < 0.70) return 2;
  if (u < 0.85) return 3;
  if (u < 0.95) return 4;
  return 5;
}

}  // namespace

void SyntheticSpec::validate() const {
  if (community_count < 1 || nodes_per_community < 1) {
    throw ParameterError("synthetic workload needs at least one community and one node");
  }
  const auto is_probability = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!is_probability(intra_edge_probability) || !is_probability(inter_edge_probability)) {
    throw ParameterError("edge probabilities must lie in [0, 1]");
  }
  if (intra_edge_probability + inter_edge_probability <= 0.0) {
    throw ParameterError("intra and inter edge probabilities cannot both be zero");
  }
  if (!(activity_skew >= 0.0) || !std::isfinite(activity_skew)) {
    throw ParameterError("activity skew must be a finite value >= 0");
  }
  if (blocks < 1 || txs_per_block < 1) throw ParameterError("synthetic stream would be empty");
}

AccountId synthetic_account(std::uint64_t seed, std::uint64_t index) {
  return AccountId::from_u64(mix64(index ^ mix64(seed + 0x9e3779b97f4a7c15ULL)));
}

std::vector<Transaction> generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  const std::uint64_t per = spec.nodes_per_community;
  const std::uint64_t n = per * spec.community_count;

  // Activity rank is a seeded permutation so busy accounts are spread over
  // communities.
  std::vector<std::uint64_t> rank(n);
  std::iota(rank.begin(), rank.end(), std::uint64_t{0});
  for (std::uint64_t i = n - 1; i > 0; --i) std::swap(rank[i], rank[uniform_below(rng, i + 1)]);

  std::vector<double> activity(n);
  for (std::uint64_t v = 0; v < n; ++v) {
    activity[v] = std::pow(static_cast<double>(rank[v] + 1), -spec.activity_skew);
  }
  std::vector<double> global(n);
  std::partial_sum(activity.begin(), activity.end(), global.begin());
  std::vector<std::vector<double>> local(spec.community_count);
  for (std::uint32_t c = 0; c < spec.community_count; ++c) {
    local[c].resize(per);
    std::partial_sum(activity.begin() + c * per, activity.begin() + (c + 1) * per, local[c].begin());
  }

  std::vector<AccountId> ids(n);
  for (std::uint64_t v = 0; v < n; ++v) ids[v] = synthetic_account(spec.seed, v);

  const double stay = spec.intra_edge_probability /
                      (spec.intra_edge_probability + spec.inter_edge_probability);
  std::vector<Transaction> txs;
  txs.reserve(spec.blocks * spec.txs_per_block);
  std::vector<std::uint64_t> picked;
  for (std::uint64_t block = 0; block < spec.blocks; ++block) {
    for (std::uint32_t t = 0; t < spec.txs_per_block; ++t) {
      picked.clear();
      const std::uint64_t first = draw(rng, global);
      picked.push_back(first);
      const std::uint32_t home = planted_community(spec, first);
      const std::size_t size = draw_size(rng);
      for (std::size_t extra = 1; extra < size; ++extra) {
        std::uint32_t c = home;
        if (spec.community_count > 1 && uniform01(rng) >= stay) {
          c = static_cast<std::uint32_t>(uniform_below(rng, spec.community_count - 1));
          if (c >= home) ++c;
        }
        for (int attempt = 0; attempt < 32; ++attempt) {
          const std::uint64_t v = c * per + draw(rng, local[c]);
          if (std::find(picked.begin(), picked.end(), v) == picked.end()) {
            picked.push_back(v);
            break;
          }
        }
      }
      std::vector<AccountId> accounts;
      accounts.reserve(picked.size());
      for (std::uint64_t v : picked) accounts.push_back(ids[v]);
      txs.push_back(make_transaction(block, std::move(accounts)));
    }
  }
  return txs;
}

}  // namespace txallo
