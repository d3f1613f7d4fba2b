#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace txallo {

/// Opaque account identifier stored as raw bytes.
///
/// Ordering is lexicographic over the unsigned byte values. That order is the
/// canonical node order used by every deterministic loop in the library.
class AccountId {
 public:
  AccountId() = default;

  /// Throws ParameterError when `bytes` is empty.
  explicit AccountId(std::string bytes);

  /// Parses an optionally `0x`-prefixed hex string, case-insensitive. An odd
  /// number of digits is left-padded with a zero nibble. Returns nullopt for
  /// empty or non-hex input.
  static std::optional<AccountId> from_hex(std::string_view text);

  /// Eight big-endian bytes of `value`.
  static AccountId from_u64(std::uint64_t value);

  const std::string& bytes() const noexcept { return bytes_; }

  /// Lowercase `0x`-prefixed hex form.
  std::string to_hex() const;

  friend bool operator==(const AccountId&, const AccountId&) = default;
  friend std::strong_ordering operator<=>(const AccountId& a, const AccountId& b) {
    const int c = a.bytes_.compare(b.bytes_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  std::string bytes_;
};

}  // namespace txallo

template <>
struct std::hash<txallo::AccountId> {
  std::size_t operator()(const txallo::AccountId& id) const noexcept {
    return std::hash<std::string>{}(id.bytes());
  }
};
