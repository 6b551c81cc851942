#pragma once

#include "simpson/core_model.hpp"

namespace simpson::bayes {

/// Posterior summaries of p_A - p_B under the uniform prior, in the
/// (N+1)-normalized form: mean (S+1)/(N+1) per arm and variance
/// (S+1)(N+1-S) / ((N+1)^2 (N+2)) per arm. The exact Beta(S+1, N-S+1)
/// moments use N+2 and N+3 instead; the two agree to leading order.
struct PosteriorMoments {
  double mean_diff = 0.0;
  double var_diff = 0.0;
};

/// Largest N_A + N_B accepted by prob_a_beats_b_exact without `force`.
inline constexpr Count kExactModeCap = 100'000;

/// Pr(p >= threshold | S successes in N trials), uniform prior.
double prob_rate_at_least(Count successes, Count trials, double threshold);

/// Significance level alpha_N(S) = sum_{j=0}^{N-S} C(N+1, j) / 2^{N+1},
/// i.e. the posterior probability that p <= 1/2.
double significance_level(Count successes, Count trials);

/// Pr(p >= 1/2) by the finite binomial sum (complement of significance_level).
double prob_rate_at_least_half_sum(Count successes, Count trials);

/// Posterior mass on [S/N - eps/sqrt(N), S/N + eps/sqrt(N)] clipped to [0,1].
double credible_mass(Count successes, Count trials, double epsilon);

/// Binomial(N, p) mass on j in [floor(Np - sqrt(N) eps), floor(Np + sqrt(N) eps)].
double binomial_interval_prob(Count trials, double p, double epsilon);

/// Exact Pr(p_A >= p_B | data) under independent uniform priors, by the
/// finite sum over j of C(S+1+j, S_A) C(F-j, F_A) / C(N+2, N_A+1).
/// Throws Error{kTooLarge} when N_A + N_B > kExactModeCap unless `force`.
double prob_a_beats_b_exact(const TrialTable& table, bool force = false);

PosteriorMoments posterior_diff_moments(const TrialTable& table);

}  // namespace simpson::bayes
