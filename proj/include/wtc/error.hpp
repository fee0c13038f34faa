#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wtc {

enum class ErrorCode {
  InvalidInterval,
  ZeroMass,
  NegativeMass,
  OverlappingSteps,
  FamilyTooLarge,
  AtomPresent,
  ZeroDensity,
  SingularSample,
  NonIntegrable,
  ParamDomain,
  StageOverflow,
  ParseError,
  UnknownClaim,
  CapExceeded,
  Usage,
};

std::string_view toString(ErrorCode code);

/// All library failures carry a machine-checkable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(toString(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace wtc
