#include "fiberline/error.hpp"

namespace fiberline {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotUnit: return "NotUnit";
    case ErrorKind::BoundViolated: return "BoundViolated";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::RejectionStall: return "RejectionStall";
    case ErrorKind::PoleSingularity: return "PoleSingularity";
    case ErrorKind::HorizontalLine: return "HorizontalLine";
    case ErrorKind::Unsupported: return "Unsupported";
    case ErrorKind::Unbounded: return "Unbounded";
    case ErrorKind::InvalidBody: return "InvalidBody";
    case ErrorKind::InsufficientRadius: return "InsufficientRadius";
    case ErrorKind::NoHits: return "NoHits";
    case ErrorKind::DegenerateWeights: return "DegenerateWeights";
    case ErrorKind::TooFewSamples: return "TooFewSamples";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

}  // namespace fiberline
