#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace curvjac {

enum class ErrorKind {
  InvalidArgument,
  DimensionMismatch,
  Degenerate,
  NullVector,
  NotAdmissible,
  ExhaustedTries,
  NumericalFailure,
  ConflictingEntries,
  BianchiViolation,
  IndexOutOfRange,
  NotSymmetric,
  FrameNotOrthonormal,
  SignatureChanged,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::Degenerate: return "Degenerate";
    case ErrorKind::NullVector: return "NullVector";
    case ErrorKind::NotAdmissible: return "NotAdmissible";
    case ErrorKind::ExhaustedTries: return "ExhaustedTries";
    case ErrorKind::NumericalFailure: return "NumericalFailure";
    case ErrorKind::ConflictingEntries: return "ConflictingEntries";
    case ErrorKind::BianchiViolation: return "BianchiViolation";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::FrameNotOrthonormal: return "FrameNotOrthonormal";
    case ErrorKind::SignatureChanged: return "SignatureChanged";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-checkable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace curvjac
