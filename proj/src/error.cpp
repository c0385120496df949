#include "sgrasp/error.hpp"

namespace sgrasp {

const char* ToString(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidScene: return "InvalidScene";
    case ErrorCode::kParse: return "Parse";
    case ErrorCode::kZeroCone: return "ZeroCone";
    case ErrorCode::kNotContained: return "NotContained";
    case ErrorCode::kTooManyContacts: return "TooManyContacts";
    case ErrorCode::kGoalInfeasible: return "GoalInfeasible";
    case ErrorCode::kGoalNotVelocityControllable: return "GoalNotVelocityControllable";
    case ErrorCode::kCrash: return "Crash";
    case ErrorCode::kFInfeasibleGoal: return "FInfeasibleGoal";
    case ErrorCode::kIndistinguishable: return "Indistinguishable";
    case ErrorCode::kNoFeasibleMode: return "NoFeasibleMode";
    case ErrorCode::kDegenerateMargin: return "DegenerateMargin";
    case ErrorCode::kDegenerateStart: return "DegenerateStart";
  }
  return "Unknown";
}

}  // namespace sgrasp
