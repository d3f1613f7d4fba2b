#include "txallo/params.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "txallo/error.hpp"

namespace txallo {

void AlloParams::validate() const {
  if (k < 1) throw ParameterError("shard count must be at least 1");
  if (!(eta >= 1.0) || !std::isfinite(eta)) {
    throw ParameterError("eta must be a finite value >= 1, got " + std::to_string(eta));
  }
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ParameterError("lambda must be a finite value > 0, got " + std::to_string(lambda));
  }
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw ParameterError("epsilon must be a finite value > 0, got " + std::to_string(epsilon));
  }
  if (max_sweeps < 1) throw ParameterError("max_sweeps must be at least 1");
}

AlloParams AlloParams::defaults_for(std::uint64_t tx_count, std::uint32_t k, double eta) {
  if (k < 1) throw ParameterError("shard count must be at least 1");
  const double txs = static_cast<double>(std::max<std::uint64_t>(tx_count, 1));
  AlloParams p;
  p.k = k;
  p.eta = eta;
  p.lambda = txs / k;
  p.epsilon = kEpsilonPerTransaction * txs;
  p.max_sweeps = kDefaultMaxSweeps;
  return p;
}

}  // namespace txallo
