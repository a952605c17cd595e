#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vlcloc {

enum class ErrorCode {
  BehindBaseline,
  NonPositiveSpot,
  BijectionViolated,
  ZeroIllumination,
  LinkDown,
  DecodeFailure,
  InvalidPower,
  DegenerateGeometry,
  NegativeRange,
  Unavailable,
  SingularFim,
  InsufficientTrials,
  InvalidParams,
  InvalidConfig,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-checkable code. All library failures throw this.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace vlcloc
