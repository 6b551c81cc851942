#pragma once

#include <array>

#include "simpson/asymptotics.hpp"
#include "simpson/core_model.hpp"

namespace simpson::paradox {

struct SimpsonReport {
  std::array<Direction, 2> part_directions{};
  Direction merged_direction = Direction::kTie;
  bool reversal = false;
  std::array<asymptotics::ComparisonResult, 2> part_confidences{};
  asymptotics::ComparisonResult merged_confidence{};
};

/// Per-part versus merged direction. A reversal needs both parts to point
/// the same (non-tie) way and the merge to point otherwise.
SimpsonReport simpson_check(const TrialTable& t1, const TrialTable& t2);

/// Two-trial prototype where arm A is tested n1 times in trial 1 and n2 times
/// in trial 2 (B the other way round), with failure fraction a for the
/// n1-sized runs and success fraction b for the n2-sized runs.
struct PrototypeTrials {
  TrialTable trial1;
  TrialTable trial2;
};

/// (1 - 2b) / (1 - 2a). Requires 0 <= a <= b < 1/2, else Error{kDomain}.
double prototype_reversal_threshold(double a, double b);

/// n1 < threshold * n2, evaluated in integers when a*n1 and b*n2 are whole.
bool prototype_reversal_predicted(double a, double b, Count n1, Count n2);

/// Builds the prototype tables:
///   trial 1: A = (1-a) n1 of n1, B = (1-b) n2 of n2
///   trial 2: A = b n2 of n2,     B = a n1 of n1
/// Throws Error{kDomain} when a*n1 or b*n2 is not an integer.
PrototypeTrials build_prototype(double a, double b, Count n1, Count n2);

}  // namespace simpson::paradox
