#pragma once

#include <optional>
#include <string_view>

#include "simpson/bayes_exact.hpp"
#include "simpson/core_model.hpp"

namespace simpson::asymptotics {

enum class Method { kExact, kNormal };

std::string_view to_string(Method m);

/// Standardized difference statistics. sigma^2 uses the N-relative weights
/// P(1-P) / (N_x / N); z = sqrt(N) * c_value.
struct NormalStatistics {
  double c_value = 0.0;  // signed, positive when A is ahead
  double sigma = 0.0;
  double z = 0.0;
};

struct ComparisonResult {
  double prob_superiority = 0.5;  // Pr(p_A >= p_B)
  Method method = Method::kNormal;
  // Absent only when both arms have degenerate rates, so sigma would be 0.
  std::optional<NormalStatistics> stats;
};

/// Confidence of one part of a decomposition, oriented B minus A: a positive
/// c_prime means B beats A inside the part.
struct SubtrialConfidence {
  double c_prime = 0.0;
  double sigma = 0.0;
  double z = 0.0;  // sqrt(N) * c_prime with N the source total
  int part_index = 1;
};

/// alpha(s) = Phi(-2s), the large-sample significance level.
double significance_limit(double s);

/// Phi(z) with z = (P_A - P_B) / sqrt(S_A F_A / N_A^3 + S_B F_B / N_B^3).
/// Throws Error{kDegenerateRate} if either arm has S in {0, N}.
ComparisonResult prob_a_beats_b_normal(const TrialTable& table);

/// E and Var of S_A/N_A - S_B/N_B given true rates.
bayes::PosteriorMoments rate_diff_moments(double p_a, double p_b, Count n_a, Count n_b);

/// Phi(eps / sqrt(pq)) - Phi(-eps / sqrt(pq)). Throws kDegenerateRate for p in {0,1}.
double interval_prob_normal(double p, double epsilon);

/// C_AB with sigma_AB; throws kDegenerateRate or kTie.
ComparisonResult aggregate_confidence(const TrialTable& table);

/// Weighted variance sigma^2 = P_A(1-P_A)/(N_A/N) + P_B(1-P_B)/(N_B/N).
double weighted_variance(double p_a, double n_a, double p_b, double n_b, double n_total);

/// C'_i for one part of a decomposition. Throws kDegenerateRate only when the
/// part's variance vanishes (both arms at rate 0 or 1); kDomain when
/// n_total is smaller than the part's trials.
SubtrialConfidence subtrial_confidence(const FractionalTable& sub, double n_total,
                                       int part_index = 1);

/// Exact comparison with the normal statistics attached when they exist.
ComparisonResult exact_comparison(const TrialTable& table, bool force = false);

/// Normal statistics when the table is non-degenerate, exact otherwise.
ComparisonResult best_comparison(const TrialTable& table, bool force = false);

}  // namespace simpson::asymptotics
