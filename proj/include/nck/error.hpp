#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nck {

enum class ErrorKind {
  InvalidArgument,
  NotHermitian,
  NotPsd,
  NoConvergence,
  CapExceeded,
  NotCommuting,
  DegenerateSupport,
  MajorizationViolated,
  NumericalBreakdown,
  KernelMismatch,
  MalformedInput,
};

std::string_view to_string(ErrorKind kind);

/// Numerical and validation failures raised by every module.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// Validation-type errors map to CLI exit code 1, the rest to 2.
  bool is_validation() const noexcept {
    return kind_ == ErrorKind::InvalidArgument || kind_ == ErrorKind::CapExceeded ||
           kind_ == ErrorKind::MalformedInput;
  }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPsd: return "NotPsd";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::NotCommuting: return "NotCommuting";
    case ErrorKind::DegenerateSupport: return "DegenerateSupport";
    case ErrorKind::MajorizationViolated: return "MajorizationViolated";
    case ErrorKind::NumericalBreakdown: return "NumericalBreakdown";
    case ErrorKind::KernelMismatch: return "KernelMismatch";
    case ErrorKind::MalformedInput: return "MalformedInput";
  }
  return "Unknown";
}

}  // namespace nck
