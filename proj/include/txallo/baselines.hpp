#pragma once

#include <array>
#include <cstdint>

#include "txallo/account.hpp"
#include "txallo/allocation.hpp"
#include "txallo/graph.hpp"

namespace txallo {

using Sha256Digest = std::array<std::uint8_t, 32>;

Sha256Digest sha256(const std::string& bytes);

/// SHA-256 of the account bytes, read as a big-endian integer, mod k.
ShardIndex hash_shard(const AccountId& account, std::uint32_t k);

/// Hash placement of every node of `graph`, caches computed.
/// Throws ParameterError when k < 1.
Allocation hash_allocate(const TransactionGraph& graph, std::uint32_t k);

}  // namespace txallo
