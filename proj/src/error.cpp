#include "minmaxkit/error.hpp"

namespace minmax {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNonFiniteEvaluation: return "NonFiniteEvaluation";
    case ErrorCode::kIllPosedProx: return "IllPosedProx";
    case ErrorCode::kMaxIterExceeded: return "MaxIterExceeded";
    case ErrorCode::kMissingProxOracle: return "MissingProxOracle";
    case ErrorCode::kTraceIncomplete: return "TraceIncomplete";
    case ErrorCode::kOutOfRangeStepSize: return "OutOfRangeStepSize";
    case ErrorCode::kDenominatorNonpositive: return "DenominatorNonpositive";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kConstraintViolated: return "ConstraintViolated";
    case ErrorCode::kConfigParse: return "ConfigParse";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

}  // namespace minmax
