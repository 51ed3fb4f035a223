#pragma once

#include <stdexcept>
#include <string>

namespace qwalk {

enum class ErrorKind {
  InvalidArgument,
  UnknownPort,
  IndexOutOfRange,
  LengthMismatch,
  EdgeNotAdjacent,
  MissingEdge,
  DegenerateFit,
  NonPositiveSample,
  ZeroMass,
  Unnormalized,
  ZeroEfficiency,
  NoBaseline,
  FitFailure,
  Numerical,
  Parse,
};

const char* to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace qwalk
