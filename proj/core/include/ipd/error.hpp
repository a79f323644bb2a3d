#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ipd {

enum class ErrorCode {
  Parse,
  InvalidInput,
  IrreducibleDenominator,
  LatticeTooSmall,
  InvalidForm,
  InconsistentRank,
  InconsistentMonodromy,
  NonIntegralDimension,
  NotIrregular,
  InvalidAnchor,
  BasisNotFound,
  SingularApproach,
  ToleranceNotMet,
  DomainError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the engine carries one of the codes above so that
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ipd
