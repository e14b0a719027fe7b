#include "deltachain/error.hpp"

namespace deltachain {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NotAMetric: return "NotAMetric";
    case ErrorKind::InsufficientWindow: return "InsufficientWindow";
    case ErrorKind::SizeOverflow: return "SizeOverflow";
    case ErrorKind::NoChain: return "NoChain";
    case ErrorKind::NotMixing: return "NotMixing";
    case ErrorKind::InsufficientSpacing: return "InsufficientSpacing";
    case ErrorKind::InsufficientMargin: return "InsufficientMargin";
    case ErrorKind::InvalidSegment: return "InvalidSegment";
    case ErrorKind::BadHorizon: return "BadHorizon";
    case ErrorKind::EmptySet: return "EmptySet";
    case ErrorKind::DegenerateWeights: return "DegenerateWeights";
    case ErrorKind::DepthMismatch: return "DepthMismatch";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::SolverIterationCap: return "SolverIterationCap";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace deltachain
