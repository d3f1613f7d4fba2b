#pragma once

#include <stdexcept>
#include <string>

namespace txallo {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameter or out-of-range argument supplied by the caller.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Input data that cannot be interpreted (malformed trace, empty stream).
class DataError : public Error {
 public:
  using Error::Error;
};

/// An account was looked up in an allocation that does not cover it.
class UnmappedAccount : public DataError {
 public:
  explicit UnmappedAccount(const std::string& account)
      : DataError("account not covered by allocation: " + account), account_(account) {}

  const std::string& account() const noexcept { return account_; }

 private:
  std::string account_;
};

/// Allocation state no longer matches the graph or the move being applied.
class StaleAllocation : public Error {
 public:
  using Error::Error;
};

/// An internal consistency check failed.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace txallo
