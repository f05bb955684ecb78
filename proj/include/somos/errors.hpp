#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace somos {

enum class ErrorKind {
  InvalidArgument,
  InvalidParams,
  InvalidSeed,
  ZeroSeed,
  DivisionByZeroTerm,
  IndexOutOfWindow,
  NonInteger,
  ZeroDenominator,
  ZeroGaugeFactor,
  MapSingular,
  DegenerateCurve,
  PoleAtLatticePoint,
  PrecisionLoss,
  ZeroScale,
  SingularMu,
  ConsistencyFailure,
  Overflow,
  NotApplicable,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above, so
/// callers (the CLI in particular) can map it to an exit code without
/// parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  // True for the kinds that describe a mathematically degenerate input
  // rather than a malformed one.
  bool is_degenerate() const noexcept;

 private:
  ErrorKind kind_;
};

/// Raised when a recurrence would divide by a zero term; records where.
class DivisionByZeroTerm : public Error {
 public:
  explicit DivisionByZeroTerm(std::int64_t index)
      : Error(ErrorKind::DivisionByZeroTerm, "pivot term at index " + std::to_string(index) + " is zero"),
        index_(index) {}
  std::int64_t index() const noexcept { return index_; }

 private:
  std::int64_t index_;
};

}  // namespace somos
