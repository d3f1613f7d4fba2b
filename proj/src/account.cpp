#include "txallo/account.hpp"

#include "txallo/error.hpp"

namespace txallo {

namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

AccountId::AccountId(std::string bytes) : bytes_(std::move(bytes)) {
  if (bytes_.empty()) throw ParameterError("account identifier must not be empty");
}

std::optional<AccountId> AccountId::from_hex(std::string_view text) {
  if (text.size() >= 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
    text.remove_prefix(2);
  }
  if (text.empty()) return std::nullopt;

  std::string bytes;
  bytes.reserve(text.size() / 2 + 1);
  std::size_t pos = 0;
  if (text.size() % 2 == 1) {
    const int lo = hex_value(text[0]);
    if (lo < 0) return std::nullopt;
    bytes.push_back(static_cast<char>(lo));
    pos = 1;
  }
  for (; pos < text.size(); pos += 2) {
    const int hi = hex_value(text[pos]);
    const int lo = hex_value(text[pos + 1]);
    if (hi < 0 || lo < 0) return std::nullopt;
    bytes.push_back(static_cast<char>((hi << 4) | lo));
  }
  return AccountId(std::move(bytes));
}

AccountId AccountId::from_u64(std::uint64_t value) {
  std::string bytes(8, '\0');
  for (int i = 7; i >= 0; --i) {
    bytes[i] = static_cast<char>(value & 0xff);
    value >>= 8;
  }
  return AccountId(std::move(bytes));
}

std::string AccountId::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out = "0x";
  out.reserve(2 + bytes_.size() * 2);
  for (char c : bytes_) {
    const auto b = static_cast<unsigned char>(c);
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

}  // namespace txallo
