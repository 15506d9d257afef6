#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace quadrep {

enum class ErrorCode {
  InvalidInput,
  InvalidFactorization,
  InvalidDiscriminant,
  InvalidForm,
  DiscriminantMismatch,
  NotEquivalent,
  ConductorNotCoprime,
  NotInvertible,
  ClassMismatch,
  UnknownClass,
  NotSquareFree,
  DeskScaleExceeded,
  CapExceeded,
};

std::string_view to_string(ErrorCode code);

// Raised for user-facing precondition failures. Internal consistency
// failures use std::logic_error instead.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace quadrep
