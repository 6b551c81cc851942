#include "simpson/error.hpp"

namespace simpson {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kCountExceedsTrials: return "COUNT_EXCEEDS_TRIALS";
    case ErrorCode::kEmptyArm: return "EMPTY_ARM";
    case ErrorCode::kCountTooLarge: return "COUNT_TOO_LARGE";
    case ErrorCode::kDomain: return "DOMAIN";
    case ErrorCode::kNoConvergence: return "NO_CONVERGENCE";
    case ErrorCode::kTooLarge: return "TOO_LARGE";
    case ErrorCode::kDegenerateRate: return "DEGENERATE_RATE";
    case ErrorCode::kTie: return "TIE";
    case ErrorCode::kPlacement: return "PLACEMENT";
    case ErrorCode::kInfeasible: return "INFEASIBLE";
    case ErrorCode::kDegenerate: return "DEGENERATE";
    case ErrorCode::kParse: return "PARSE";
  }
  return "UNKNOWN";
}

}  // namespace simpson
