#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace opineq {

enum class ErrorKind {
  NotHermitian,
  NotPSD,
  NoConvergence,
  DimensionMismatch,
  Overflow,
  BadDimension,
  BadRange,
  NotInvertible,
  HypothesisViolated,
  ParamOutOfRange,
  UnknownSpec,
  UnknownRecipe,
  VersionMismatch,
  ConfigInvalid,
  IoFailure,
  ParseError,
};

std::string_view to_string(ErrorKind kind);

// Every recoverable failure in the library is reported through this type; the
// kind is the stable, machine-checkable part and what() carries context.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace opineq
