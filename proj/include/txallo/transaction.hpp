#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "txallo/account.hpp"

namespace txallo {

/// One ledger entry: the union of its input and output accounts plus the
/// block height. Direction is not kept.
struct Transaction {
  std::uint64_t block = 0;
  /// Sorted, deduplicated, non-empty.
  std::vector<AccountId> accounts;

  friend bool operator==(const Transaction&, const Transaction&) = default;
};

/// Builds a well-formed transaction; sorts and deduplicates `accounts`.
/// Throws DataError when no account is given.
Transaction make_transaction(std::uint64_t block, std::vector<AccountId> accounts);

/// Number of unordered account pairs the transaction expands into:
/// C(n, 2) for n >= 2, and 1 for a single-account (self-loop) transaction.
std::uint64_t pair_count(const Transaction& tx);

/// Stable sort by block height, keeping in-block order.
void sort_canonical(std::vector<Transaction>& txs);

/// Sorted, deduplicated union of accounts over `txs`.
std::vector<AccountId> touched_accounts(std::span<const Transaction> txs);

}  // namespace txallo
