#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace simpson {

using Count = std::uint64_t;

/// Counts above this bound cannot be represented exactly as doubles.
inline constexpr Count kMaxCount = (Count{1} << 53) - 1;

/// Validated 2x2 success/trial counts for arms A and B. Construct through
/// make_table(); the fields are public for reading only.
struct TrialTable {
  Count successes_a = 0;
  Count trials_a = 1;
  Count successes_b = 0;
  Count trials_b = 1;

  Count failures_a() const { return trials_a - successes_a; }
  Count failures_b() const { return trials_b - successes_b; }
  Count total_trials() const { return trials_a + trials_b; }

  friend bool operator==(const TrialTable&, const TrialTable&) = default;
};

/// Real-valued counts, as produced by the decomposition solvers before any
/// rounding to whole trials.
struct FractionalTable {
  double successes_a = 0.0;
  double trials_a = 1.0;
  double successes_b = 0.0;
  double trials_b = 1.0;

  double rate_a() const { return successes_a / trials_a; }
  double rate_b() const { return successes_b / trials_b; }
};

struct RatePair {
  double p_a = 0.0;
  double p_b = 0.0;
  double n_a = 1.0;
  double n_b = 1.0;
  double gamma = 0.5;  // n_a / (n_a + n_b)
};

enum class Direction { kAAhead, kBAhead, kTie };

std::string_view to_string(Direction d);

// Throws Error{kCountExceedsTrials | kEmptyArm | kCountTooLarge}.
TrialTable make_table(Count successes_a, Count trials_a, Count successes_b,
                      Count trials_b);

/// Validates real-valued counts: 0 <= successes <= trials, trials > 0.
/// Throws Error{kDomain}.
FractionalTable make_fractional(double successes_a, double trials_a,
                                double successes_b, double trials_b);

RatePair rates(const TrialTable& table);
RatePair rates(const FractionalTable& table);

TrialTable merge(const TrialTable& t1, const TrialTable& t2);
FractionalTable merge(const FractionalTable& t1, const FractionalTable& t2);

/// Exact sign of S_A/N_A - S_B/N_B by integer cross-multiplication.
Direction direction(const TrialTable& table);

/// Exchanges the roles of arms A and B.
TrialTable swap_arms(const TrialTable& table);

FractionalTable to_fractional(const TrialTable& table);

}  // namespace simpson
