#include "onebit/errors.hpp"

#include <fmt/format.h>

namespace onebit {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::NumericalBlowup: return "NumericalBlowup";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::NonMonotoneInput: return "NonMonotoneInput";
    case ErrorKind::OutOfHorizon: return "OutOfHorizon";
    case ErrorKind::InconsistentLog: return "InconsistentLog";
    case ErrorKind::ZeroInformation: return "ZeroInformation";
    case ErrorKind::HorizonExhausted: return "HorizonExhausted";
    case ErrorKind::GammaTooSmall: return "GammaTooSmall";
    case ErrorKind::NoMessages: return "NoMessages";
    case ErrorKind::NonPositiveTime: return "NonPositiveTime";
    case ErrorKind::NonPositiveInputs: return "NonPositiveInputs";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::ZeroDrift: return "ZeroDrift";
    case ErrorKind::SampleTooSmall: return "SampleTooSmall";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

namespace {
std::string join_violations(const std::vector<std::string>& v) {
  std::string out = fmt::format("{} violation(s)", v.size());
  for (const auto& s : v) out += "\n  - " + s;
  return out;
}
}  // namespace

ValidationError::ValidationError(std::vector<std::string> violations)
    : Error(ErrorKind::ValidationError, join_violations(violations)),
      violations_(std::move(violations)) {}

ParseError::ParseError(int line, std::string field, const std::string& what)
    : Error(ErrorKind::ParseError, fmt::format("line {}, field '{}': {}", line, field, what)),
      line_(line),
      field_(std::move(field)) {}

}  // namespace onebit
