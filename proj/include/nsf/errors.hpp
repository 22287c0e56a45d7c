#pragma once

#include <stdexcept>
#include <string>

namespace nsf {

enum class ErrorKind {
  NonPositiveState,
  CflViolation,
  BoundaryInconsistency,
  NonPositiveCoefficient,
  SingularBlockSystem,
  CompatibilityViolation,
  InsufficientHistory,
  MissingPriorLayer,
  NonDecayingRHS,
  GridTooCoarseForLayer,
  GridMismatch,
  NonPositiveError,
  ConfigError,
  IoError,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the library carries a machine-readable kind.
class NsfError : public std::runtime_error {
 public:
  NsfError(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace nsf
