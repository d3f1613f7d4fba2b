#include "txallo/baselines.hpp"

#include <openssl/evp.h>

#include "txallo/error.hpp"

namespace txallo {

Sha256Digest sha256(const std::string& bytes) {
  Sha256Digest digest{};
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1 ||
      length != digest.size()) {
    throw InvariantViolation("SHA-256 computation failed");
  }
  return digest;
}

ShardIndex hash_shard(const AccountId& account, std::uint32_t k) {
  if (k < 1) throw ParameterError("shard count must be at least 1");
  // Big-endian digest mod k, one byte at a time.
  std::uint64_t remainder = 0;
  for (std::uint8_t byte : sha256(account.bytes())) remainder = (remainder * 256 + byte) % k;
  return static_cast<ShardIndex>(remainder);
}

Allocation hash_allocate(const TransactionGraph& graph, std::uint32_t k) {
  Allocation alloc(k, graph.node_count());
  for (NodeId v = 0; v < graph.node_count(); ++v) alloc.set_shard(v, hash_shard(graph.account(v), k));
  alloc.recompute(graph);
  return alloc;
}

}  // namespace txallo
