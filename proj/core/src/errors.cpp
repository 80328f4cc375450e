#include "optoent/errors.hpp"

namespace optoent {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MissingField: return "MissingField";
    case ErrorCode::NonPhysicalValue: return "NonPhysicalValue";
    case ErrorCode::ConflictingDrive: return "ConflictingDrive";
    case ErrorCode::ConflictingField: return "ConflictingField";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NoRoot: return "NoRoot";
    case ErrorCode::BranchOutOfRange: return "BranchOutOfRange";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::UnstableDrift: return "UnstableDrift";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonPhysicalCovariance: return "NonPhysicalCovariance";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace optoent
