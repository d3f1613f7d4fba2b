#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "txallo/allocation.hpp"
#include "txallo/gain.hpp"
#include "txallo/graph.hpp"
#include "txallo/params.hpp"
#include "txallo/transaction.hpp"

namespace txallo {

/// Called after every accepted optimisation move, with the updated allocation.
using MoveObserver = std::function<void(const MoveDelta&, const Allocation&)>;

struct GTxAlloResult {
  Allocation allocation;
  std::uint32_t sweeps = 0;
  /// Capacity-bounded system throughput of the returned allocation.
  double final_lambda = 0.0;
  /// Throughput gained in each optimisation sweep.
  std::vector<double> history;
  /// Communities found by the Louvain initialisation.
  std::uint32_t louvain_communities = 0;
};

/// Global allocation over the whole graph.
///
/// 1. Louvain communities; the k heaviest by workload become shards 0..k-1
///    (ties to the community with the smaller first account), missing shards
///    stay empty.
/// 2. Nodes of the remaining communities, in account order, join the connected
///    shard with the best join gain, or the best of all shards if none is
///    connected.
/// 3. Sweeps over all nodes in account order, moving a node to its best
///    connected shard when that strictly raises throughput, until a sweep
///    gains less than epsilon or max_sweeps is reached.
///
/// Ties always go to the smallest shard index. Throws DataError on an empty
/// graph and ParameterError on invalid params.
GTxAlloResult g_txallo(const TransactionGraph& graph, const AlloParams& params,
                       const MoveObserver& observer = {});

/// Transactions committed since the previous allocation update.
struct EpochDelta {
  std::vector<Transaction> new_txs;
  /// Accounts appearing in new_txs, sorted.
  std::vector<AccountId> touched;
};

EpochDelta make_epoch_delta(std::vector<Transaction> new_txs);

/// Adaptive update touching only accounts of the new transactions.
///
/// `merged` must already contain `epoch.new_txs`. `prev` is the previous
/// result over the graph before the merge; its caches are brought up to date
/// from the epoch's transactions (or rebuilt when the transaction counts do
/// not line up). New accounts join their best shard in account order, then
/// sweeps restricted to the touched accounts run as in g_txallo.
///
/// Throws StaleAllocation when a node outside the touched set is unassigned,
/// and DataError when a touched account is missing from `merged`.
Allocation a_txallo(const TransactionGraph& merged, Allocation prev, const EpochDelta& epoch,
                    const AlloParams& params, const MoveObserver& observer = {});

}  // namespace txallo
