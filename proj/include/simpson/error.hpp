#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace simpson {

enum class ErrorCode {
  kCountExceedsTrials,
  kEmptyArm,
  kCountTooLarge,
  kDomain,
  kNoConvergence,
  kTooLarge,
  kDegenerateRate,
  kTie,
  kPlacement,
  kInfeasible,
  kDegenerate,
  kParse,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library. The code is the stable part of the
/// contract; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace simpson
