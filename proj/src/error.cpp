#include "macroplace/error.h"

namespace macroplace {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MissingFile: return "MissingFile";
    case ErrorKind::MalformedLine: return "MalformedLine";
    case ErrorKind::DanglingPinReference: return "DanglingPinReference";
    case ErrorKind::IoFailure: return "IoFailure";
    case ErrorKind::PreconditionViolation: return "PreconditionViolation";
    case ErrorKind::InvalidDimension: return "InvalidDimension";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::UnknownNode: return "UnknownNode";
    case ErrorKind::MissingInitialLocation: return "MissingInitialLocation";
    case ErrorKind::PointOutsideCanvas: return "PointOutsideCanvas";
    case ErrorKind::DegenerateNet: return "DegenerateNet";
    case ErrorKind::EmptyNetlist: return "EmptyNetlist";
    case ErrorKind::EmptyCellSet: return "EmptyCellSet";
    case ErrorKind::Unplaceable: return "Unplaceable";
    case ErrorKind::InitFailed: return "InitFailed";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace macroplace
