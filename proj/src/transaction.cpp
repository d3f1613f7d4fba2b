#include "txallo/transaction.hpp"

#include <algorithm>

#include "txallo/error.hpp"

namespace txallo {

Transaction make_transaction(std::uint64_t block, std::vector<AccountId> accounts) {
  if (accounts.empty()) throw DataError("transaction without accounts");
  std::sort(accounts.begin(), accounts.end());
  accounts.erase(std::unique(accounts.begin(), accounts.end()), accounts.end());
  return Transaction{block, std::move(accounts)};
}

std::uint64_t pair_count(const Transaction& tx) {
  const std::uint64_t n = tx.accounts.size();
  return n < 2 ? 1 : n * (n - 1) / 2;
}

void sort_canonical(std::vector<Transaction>& txs) {
  std::stable_sort(txs.begin(), txs.end(),
                   [](const Transaction& a, const Transaction& b) { return a.block < b.block; });
}

std::vector<AccountId> touched_accounts(std::span<const Transaction> txs) {
  std::vector<AccountId> out;
  for (const Transaction& tx : txs) out.insert(out.end(), tx.accounts.begin(), tx.accounts.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace txallo
