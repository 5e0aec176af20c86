#pragma once

#include <stdexcept>
#include <string>

namespace loopcorr {

enum class ErrorKind {
  InfeasibleParameters,
  RejectionBudgetExhausted,
  CapExceeded,
  DomainError,
  SingularInput,
  ParseError,
  NoRoot,
  ConsistencyFailure,
  IoError,
};

const char* to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a kind so callers (and the
/// CLI) can distinguish refusals from genuine faults.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace loopcorr
