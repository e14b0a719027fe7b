#pragma once

#include <stdexcept>
#include <string>

namespace deltachain {

/// Categories of failure raised by the library. The CLI maps a few of
/// these onto process exit codes.
enum class ErrorKind {
  NotAMetric,
  InsufficientWindow,
  SizeOverflow,
  NoChain,
  NotMixing,
  InsufficientSpacing,
  InsufficientMargin,
  InvalidSegment,
  BadHorizon,
  EmptySet,
  DegenerateWeights,
  DepthMismatch,
  Infeasible,
  SolverIterationCap,
  InvalidArgument,
  SchemaError,
  IoError,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind),
        message_(message) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// The message without the kind prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
};

}  // namespace deltachain
