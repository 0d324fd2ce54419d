#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wavetails {

enum class ErrorKind {
  DomainError,
  NonfiniteSupremum,
  CouplingTooLarge,
  SupportViolation,
  CflViolation,
  AmplitudeBlowup,
  BoundaryContamination,
  NonmonotoneErrors,
  QuadratureNoConvergence,
  OrderCapExceeded,
  SignChangeInWindow,
  BelowNoiseFloor,
  WindowTooShort,
  SignChange,
  ConfigError,
  IoError,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::NonfiniteSupremum: return "NonfiniteSupremum";
    case ErrorKind::CouplingTooLarge: return "CouplingTooLarge";
    case ErrorKind::SupportViolation: return "SupportViolation";
    case ErrorKind::CflViolation: return "CflViolation";
    case ErrorKind::AmplitudeBlowup: return "AmplitudeBlowup";
    case ErrorKind::BoundaryContamination: return "BoundaryContamination";
    case ErrorKind::NonmonotoneErrors: return "NonmonotoneErrors";
    case ErrorKind::QuadratureNoConvergence: return "QuadratureNoConvergence";
    case ErrorKind::OrderCapExceeded: return "OrderCapExceeded";
    case ErrorKind::SignChangeInWindow: return "SignChangeInWindow";
    case ErrorKind::BelowNoiseFloor: return "BelowNoiseFloor";
    case ErrorKind::WindowTooShort: return "WindowTooShort";
    case ErrorKind::SignChange: return "SignChange";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above; the
/// message always starts with the kind name so it shows up verbatim on stderr.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace wavetails
