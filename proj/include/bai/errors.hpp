#pragma once

#include <stdexcept>
#include <string>

namespace bai {

// Caller broke a documented precondition or protocol (bad argument, flag,
// out-of-order session call).
class UsageError : public std::invalid_argument {
 public:
  explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

// A bandit instance violates a structural requirement (e.g. tied best arm).
class InvalidInstanceError : public std::runtime_error {
 public:
  explicit InvalidInstanceError(const std::string& what)
      : std::runtime_error(what) {}
};

// The requested configuration cannot be run (e.g. budget too small for the
// construction). Sweeps record these as skipped cells instead of crashing.
class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace bai
