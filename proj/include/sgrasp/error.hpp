#pragma once

#include <stdexcept>
#include <string>

namespace sgrasp {

enum class ErrorCode {
  kInvalidScene,
  kParse,
  kZeroCone,
  kNotContained,
  kTooManyContacts,
  kGoalInfeasible,
  kGoalNotVelocityControllable,
  kCrash,
  kFInfeasibleGoal,
  kIndistinguishable,
  kNoFeasibleMode,
  kDegenerateMargin,
  kDegenerateStart,
};

const char* ToString(ErrorCode code);

// All library failures are reported through this exception type; the code
// lets callers (the CLI in particular) dispatch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sgrasp
