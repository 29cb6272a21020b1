#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace onebit {

enum class ErrorKind {
  InvalidSpec,
  NumericalBlowup,
  GridMismatch,
  NonMonotoneInput,
  OutOfHorizon,
  InconsistentLog,
  ZeroInformation,
  HorizonExhausted,
  GammaTooSmall,
  NoMessages,
  NonPositiveTime,
  NonPositiveInputs,
  QuadratureFailure,
  ZeroDrift,
  SampleTooSmall,
  ParseError,
  ValidationError,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so callers can
/// branch on it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised by strict config validation; lists every violation found, not just the first.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> violations);

  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  std::vector<std::string> violations_;
};

/// Config syntax error pinned to a line (1-based, 0 when unknown) and field.
class ParseError : public Error {
 public:
  ParseError(int line, std::string field, const std::string& what);

  int line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  int line_;
  std::string field_;
};

}  // namespace onebit
