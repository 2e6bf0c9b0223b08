#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fiberline {

enum class ErrorKind {
  NotUnit,
  BoundViolated,
  NonFinite,
  RejectionStall,
  PoleSingularity,
  HorizontalLine,
  Unsupported,
  Unbounded,
  InvalidBody,
  InsufficientRadius,
  NoHits,
  DegenerateWeights,
  TooFewSamples,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries a kind; the CLI maps kinds to
// exit codes and prints the kind name on stderr.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const { return to_string(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace fiberline
