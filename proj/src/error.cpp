#include "qwalk/error.hpp"

namespace qwalk {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::UnknownPort: return "unknown-port";
    case ErrorKind::IndexOutOfRange: return "index-out-of-range";
    case ErrorKind::LengthMismatch: return "length-mismatch";
    case ErrorKind::EdgeNotAdjacent: return "edge-not-adjacent";
    case ErrorKind::MissingEdge: return "missing-edge";
    case ErrorKind::DegenerateFit: return "degenerate-fit";
    case ErrorKind::NonPositiveSample: return "non-positive-sample";
    case ErrorKind::ZeroMass: return "zero-mass";
    case ErrorKind::Unnormalized: return "unnormalized-input";
    case ErrorKind::ZeroEfficiency: return "zero-efficiency";
    case ErrorKind::NoBaseline: return "no-baseline";
    case ErrorKind::FitFailure: return "fit-failure";
    case ErrorKind::Numerical: return "numerical-failure";
    case ErrorKind::Parse: return "parse-error";
  }
  return "unknown";
}

}  // namespace qwalk
