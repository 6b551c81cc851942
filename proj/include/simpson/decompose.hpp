#pragma once

#include <array>
#include <optional>

#include "simpson/asymptotics.hpp"
#include "simpson/core_model.hpp"

namespace simpson::decompose {

using Parts = std::array<FractionalTable, 2>;

/// Split fractions: part 1 receives alpha*N_A trials of arm A and beta*N_B
/// trials of arm B; part 2 receives the rest.
struct SplitFractions {
  double alpha = 0.5;
  double beta = 0.5;
};

struct AveragingRates {
  double lambda = 0.0;  // common rate inside part 1
  double mu = 1.0;      // common rate inside part 2
};

/// A reversing decomposition at common confidence c_prime. Sub-rates satisfy
///   alpha P_A1 + (1-alpha) P_A2 = P_A,  beta P_B1 + (1-beta) P_B2 = P_B,
///   P_Bi - P_Ai = c_prime * sigma_i,
/// with sigma_i the part's weighted standard deviation evaluated at the
/// sub-rates themselves.
struct DecompositionPlan {
  double alpha = 0.0;
  double beta = 0.0;
  double c_prime = 0.0;
  double k1 = 0.0;
  double k2 = 0.0;
  double sigma_1 = 0.0;
  double sigma_2 = 0.0;
  double sigma_alpha = 0.0;  // alpha sigma_1 + (1-alpha) sigma_2
  double sigma_beta = 0.0;   // beta sigma_1 + (1-beta) sigma_2
  double p_a1 = 0.0;
  double p_a2 = 0.0;
  double p_b1 = 0.0;
  double p_b2 = 0.0;
  int iterations = 0;
  bool damped = false;
};

struct ReversalSolution {
  DecompositionPlan plan;
  Parts parts;
  std::array<asymptotics::SubtrialConfidence, 2> realized{};
  bool verified = false;
};

/// Rounded decomposition with confidences recomputed on the whole counts.
struct IntegerSplit {
  std::array<TrialTable, 2> parts;
  std::array<std::optional<asymptotics::SubtrialConfidence>, 2> realized;
  bool reversal_holds = false;  // B strictly ahead in both integer parts
  bool meets_target = false;    // both realized C'_i >= target - 1e-9
};

/// Fixed-point controls for solve_reversal.
struct SolverOptions {
  int max_iterations = 200;
  double tolerance = 1e-12;
  double damping = 0.5;
};

/// Search controls for maximize_reversal.
struct SearchOptions {
  int lattice = 101;
  int refinement_passes = 2;
  int refinement_half_width = 20;  // points on each side, at 1/10 of the prior spacing
  double bisection_tolerance = 1e-9;
};

inline constexpr double kVerificationSlack = 1e-9;

/// Splits the table into two parts with equal A/B rates: lambda in part 1 and
/// mu in part 2. Both aggregate rates must lie strictly between lambda and mu
/// (either ordering), otherwise Error{kPlacement}; P_A = P_B gives Error{kTie}.
Parts neutralize(const TrialTable& table, double lambda, double mu);

/// Split fractions implied by (lambda, mu).
SplitFractions neutralizing_fractions(const RatePair& rates, double lambda, double mu);

/// lambda at the middle of (0, min rate), mu at the middle of (max rate, 1).
AveragingRates suggest_lambda_mu(const TrialTable& table);

/// Solves the common-confidence reversal system for fixed (alpha, beta, c').
/// Throws kDegenerate (alpha = beta), kInfeasible (necessary condition fails
/// or a sub-rate leaves [0,1]), kNoConvergence, kDegenerateRate, kTie.
ReversalSolution solve_reversal(const TrialTable& table, double alpha, double beta,
                                double c_prime, const SolverOptions& options = {});

/// Sign conditions for a non-negative c': alpha P_B >= beta P_A and
/// (1-beta)(1-P_A) >= (1-alpha)(1-P_B) when alpha >= beta; mirrored otherwise.
bool necessary_feasible(const RatePair& rates, double alpha, double beta);

/// Minimum of the four box-constraint ratios for given sigma aggregates.
double cprime_ceiling_exact(const RatePair& rates, double alpha, double beta,
                            double sigma_alpha, double sigma_beta);

/// Ceiling that holds for every sub-rate, from the bound p(1-p) <= 1/4.
double cprime_ceiling_sufficient(const RatePair& rates, double alpha, double beta);

/// Closed-form split with (1-alpha)/(1-beta) = ((1-P_A)/(1-P_B))^2 and
/// beta/alpha = (P_B/P_A)^2.
SplitFractions special_alpha_beta(const RatePair& rates);

/// Simplified ceiling at the special split, in its branch-on-(P_A + P_B) form.
/// Reference output only: it does not bound feasibility (see README).
double cprime_ceiling_printed(const RatePair& rates);

/// Largest c' (to `tolerance`) at which solve_reversal verifies for the split,
/// or nullopt if even c' = 0 is infeasible. Assumes feasibility is monotone
/// in c'.
std::optional<double> max_verified_cprime(const TrialTable& table, double alpha, double beta,
                                          double tolerance = 1e-9);

/// Best verified common c' over a lattice of splits plus refinement.
/// Deterministic: ties go to the smallest alpha, then the smallest beta.
/// Throws kInfeasible if no split admits c' > 0.
ReversalSolution maximize_reversal(const TrialTable& table, const SearchOptions& options = {});

/// Rounds a fractional split to whole counts, part 1 half-up and part 2 as
/// the remainder, so every column total is preserved exactly.
IntegerSplit integerize(const Parts& parts, std::optional<double> target_c_prime = std::nullopt);

}  // namespace simpson::decompose
