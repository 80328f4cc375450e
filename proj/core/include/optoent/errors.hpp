#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace optoent {

enum class ErrorCode {
  MissingField,
  NonPhysicalValue,
  ConflictingDrive,
  ConflictingField,
  ParseError,
  NoRoot,
  BranchOutOfRange,
  NoConvergence,
  UnstableDrift,
  SingularSystem,
  NotConverged,
  DimensionMismatch,
  NonPhysicalCovariance,
  InvalidArgument,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace optoent
