#include "hyperspace/error.hpp"

namespace hyperspace {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kDimMismatch: return "DimMismatch";
    case ErrorCode::kBackendMismatch: return "BackendMismatch";
    case ErrorCode::kInvalidScalar: return "InvalidScalar";
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kZeroVector: return "ZeroVector";
    case ErrorCode::kEmptyMemory: return "EmptyMemory";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDegenerateSpline: return "DegenerateSpline";
    case ErrorCode::kEmptyPath: return "EmptyPath";
    case ErrorCode::kTrainingDiverged: return "TrainingDiverged";
    case ErrorCode::kUntrained: return "Untrained";
    case ErrorCode::kFormat: return "Format";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kConfig: return "Config";
  }
  return "Unknown";
}

}  // namespace hyperspace
