#include "ipd/error.hpp"

namespace ipd {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::IrreducibleDenominator: return "IrreducibleDenominator";
    case ErrorCode::LatticeTooSmall: return "LatticeTooSmall";
    case ErrorCode::InvalidForm: return "InvalidForm";
    case ErrorCode::InconsistentRank: return "InconsistentRank";
    case ErrorCode::InconsistentMonodromy: return "InconsistentMonodromy";
    case ErrorCode::NonIntegralDimension: return "NonIntegralDimension";
    case ErrorCode::NotIrregular: return "NotIrregular";
    case ErrorCode::InvalidAnchor: return "InvalidAnchor";
    case ErrorCode::BasisNotFound: return "BasisNotFound";
    case ErrorCode::SingularApproach: return "SingularApproach";
    case ErrorCode::ToleranceNotMet: return "ToleranceNotMet";
    case ErrorCode::DomainError: return "DomainError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace ipd
