#include "simpson/core_model.hpp"

#include <cmath>
#include <string>

#include "simpson/error.hpp"

namespace simpson {
namespace {

void check_arm(Count successes, Count trials, char label) {
  if (trials > kMaxCount || successes > kMaxCount) {
    throw Error(ErrorCode::kCountTooLarge,
                std::string("arm ") + label + " count exceeds 2^53-1");
  }
  if (trials == 0) {
    throw Error(ErrorCode::kEmptyArm, std::string("arm ") + label + " has no trials");
  }
  if (successes > trials) {
    throw Error(ErrorCode::kCountExceedsTrials,
                std::string("arm ") + label + ": " + std::to_string(successes) +
                    " successes > " + std::to_string(trials) + " trials");
  }
}

void check_fractional_arm(double successes, double trials, char label) {
  if (!std::isfinite(successes) || !std::isfinite(trials) || !(trials > 0.0) ||
      successes < 0.0 || successes > trials) {
    throw Error(ErrorCode::kDomain,
                std::string("fractional arm ") + label + " violates 0 <= S <= N, N > 0");
  }
}

}  // namespace

std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::kAAhead: return "A_AHEAD";
    case Direction::kBAhead: return "B_AHEAD";
    case Direction::kTie: return "TIE";
  }
  return "TIE";
}

TrialTable make_table(Count successes_a, Count trials_a, Count successes_b,
                      Count trials_b) {
  check_arm(successes_a, trials_a, 'A');
  check_arm(successes_b, trials_b, 'B');
  return TrialTable{successes_a, trials_a, successes_b, trials_b};
}

FractionalTable make_fractional(double successes_a, double trials_a,
                                double successes_b, double trials_b) {
  check_fractional_arm(successes_a, trials_a, 'A');
  check_fractional_arm(successes_b, trials_b, 'B');
  return FractionalTable{successes_a, trials_a, successes_b, trials_b};
}

RatePair rates(const TrialTable& table) {
  const auto n_a = static_cast<double>(table.trials_a);
  const auto n_b = static_cast<double>(table.trials_b);
  return RatePair{
      static_cast<double>(table.successes_a) / n_a,
      static_cast<double>(table.successes_b) / n_b,
      n_a,
      n_b,
      n_a / static_cast<double>(table.trials_a + table.trials_b),
  };
}

RatePair rates(const FractionalTable& table) {
  return RatePair{table.rate_a(), table.rate_b(), table.trials_a, table.trials_b,
                  table.trials_a / (table.trials_a + table.trials_b)};
}

TrialTable merge(const TrialTable& t1, const TrialTable& t2) {
  return make_table(t1.successes_a + t2.successes_a, t1.trials_a + t2.trials_a,
                    t1.successes_b + t2.successes_b, t1.trials_b + t2.trials_b);
}

FractionalTable merge(const FractionalTable& t1, const FractionalTable& t2) {
  return FractionalTable{t1.successes_a + t2.successes_a, t1.trials_a + t2.trials_a,
                         t1.successes_b + t2.successes_b, t1.trials_b + t2.trials_b};
}

Direction direction(const TrialTable& table) {
  using Wide = unsigned __int128;
  const Wide lhs = Wide{table.successes_a} * table.trials_b;
  const Wide rhs = Wide{table.successes_b} * table.trials_a;
  if (lhs > rhs) return Direction::kAAhead;
  if (lhs < rhs) return Direction::kBAhead;
  return Direction::kTie;
}

TrialTable swap_arms(const TrialTable& table) {
  return TrialTable{table.successes_b, table.trials_b, table.successes_a, table.trials_a};
}

FractionalTable to_fractional(const TrialTable& table) {
  return FractionalTable{static_cast<double>(table.successes_a),
                         static_cast<double>(table.trials_a),
                         static_cast<double>(table.successes_b),
                         static_cast<double>(table.trials_b)};
}

}  // namespace simpson
