#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace macroplace {

enum class ErrorKind {
  MissingFile,
  MalformedLine,
  DanglingPinReference,
  IoFailure,
  PreconditionViolation,
  InvalidDimension,
  OutOfRange,
  UnknownNode,
  MissingInitialLocation,
  PointOutsideCanvas,
  DegenerateNet,
  EmptyNetlist,
  EmptyCellSet,
  Unplaceable,
  InitFailed,
  LengthMismatch,
  DegenerateInput,
  InvalidConfig,
};

std::string_view to_string(ErrorKind kind);

// Every recoverable failure in the library is reported through this type;
// kind() lets callers (and tests) branch on the category.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace macroplace
