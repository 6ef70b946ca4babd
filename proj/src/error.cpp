#include "hetpredict/error.hpp"

namespace hetpredict {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Io: return "Io";
    case ErrorCode::Config: return "Config";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::BadValue: return "BadValue";
    case ErrorCode::DuplicateKey: return "DuplicateKey";
    case ErrorCode::MixedMachines: return "MixedMachines";
    case ErrorCode::MissingLocal: return "MissingLocal";
    case ErrorCode::NonPositiveScore: return "NonPositiveScore";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::TooFewRuns: return "TooFewRuns";
    case ErrorCode::MixedTasks: return "MixedTasks";
    case ErrorCode::TaskMismatch: return "TaskMismatch";
    case ErrorCode::NoFactors: return "NoFactors";
    case ErrorCode::ZeroActual: return "ZeroActual";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::MissingEstimate: return "MissingEstimate";
    case ErrorCode::MissingActual: return "MissingActual";
    case ErrorCode::MissingModel: return "MissingModel";
  }
  return "Unknown";
}

}  // namespace hetpredict
