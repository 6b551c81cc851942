#include "simpson/bayes_exact.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "simpson/error.hpp"
#include "simpson/special_fn.hpp"

namespace simpson::bayes {
namespace {

void check_counts(Count successes, Count trials) {
  if (successes > trials) {
    throw Error(ErrorCode::kDomain, "successes exceed trials");
  }
  if (trials > kMaxCount) throw Error(ErrorCode::kCountTooLarge, "trials exceed 2^53-1");
}

void check_rate(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::kDomain, std::string(what) + " must lie in [0,1]");
  }
}

// log of sum_{j=lo}^{hi} C(n, j) - n ln 2 over an index range of C(n, .).
double log_half_binomial_sum(Count n, Count lo, Count hi) {
  std::vector<double> terms;
  terms.reserve(hi - lo + 1);
  const double log_scale = static_cast<double>(n) * std::numbers::ln2;
  for (Count j = lo; j <= hi; ++j) terms.push_back(special::log_binomial(n, j) - log_scale);
  return special::log_sum_exp(terms);
}

}  // namespace

double prob_rate_at_least(Count successes, Count trials, double threshold) {
  check_counts(successes, trials);
  check_rate(threshold, "threshold");
  if (threshold == 0.0) return 1.0;
  if (threshold == 1.0) return 0.0;
  // 1 - I_t(S+1, N+1-S) = I_{1-t}(N+1-S, S+1); the second form keeps
  // precision when the answer is close to 1.
  const auto s = static_cast<double>(successes);
  const auto f = static_cast<double>(trials - successes);
  return special::regularized_incomplete_beta(1.0 - threshold, f + 1.0, s + 1.0);
}

double significance_level(Count successes, Count trials) {
  check_counts(successes, trials);
  return std::exp(log_half_binomial_sum(trials + 1, 0, trials - successes));
}

double prob_rate_at_least_half_sum(Count successes, Count trials) {
  check_counts(successes, trials);
  // Terms j = N-S+1 .. N+1 are exactly the ones dropped from alpha_N(S).
  return std::exp(log_half_binomial_sum(trials + 1, trials - successes + 1, trials + 1));
}

double credible_mass(Count successes, Count trials, double epsilon) {
  check_counts(successes, trials);
  if (trials == 0) throw Error(ErrorCode::kDomain, "credible_mass requires trials >= 1");
  if (!(epsilon >= 0.0)) throw Error(ErrorCode::kDomain, "epsilon must be >= 0");
  const auto n = static_cast<double>(trials);
  const double center = static_cast<double>(successes) / n;
  const double half_width = epsilon / std::sqrt(n);
  const double lo = std::max(0.0, center - half_width);
  const double hi = std::min(1.0, center + half_width);
  if (hi <= lo) return 0.0;
  const double a = static_cast<double>(successes) + 1.0;
  const double b = static_cast<double>(trials - successes) + 1.0;
  return std::max(0.0, special::regularized_incomplete_beta(hi, a, b) -
                           special::regularized_incomplete_beta(lo, a, b));
}

double binomial_interval_prob(Count trials, double p, double epsilon) {
  if (trials == 0) throw Error(ErrorCode::kDomain, "binomial_interval_prob requires trials >= 1");
  if (trials > kMaxCount) throw Error(ErrorCode::kCountTooLarge, "trials exceed 2^53-1");
  check_rate(p, "p");
  if (!(epsilon >= 0.0)) throw Error(ErrorCode::kDomain, "epsilon must be >= 0");
  const auto n = static_cast<double>(trials);
  const double mean = n * p;
  const double spread = std::sqrt(n) * epsilon;
  const double lo_real = std::floor(mean - spread);
  const double hi_real = std::floor(mean + spread);
  if (hi_real < 0.0 || lo_real > n) return 0.0;
  const Count lo = lo_real < 0.0 ? 0 : static_cast<Count>(lo_real);
  const Count hi = hi_real > n ? trials : static_cast<Count>(hi_real);
  if (p == 0.0) return lo == 0 ? 1.0 : 0.0;
  if (p == 1.0) return hi == trials ? 1.0 : 0.0;
  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  std::vector<double> terms;
  terms.reserve(hi - lo + 1);
  for (Count j = lo; j <= hi; ++j) {
    terms.push_back(special::log_binomial(trials, j) + static_cast<double>(j) * log_p +
                    static_cast<double>(trials - j) * log_q);
  }
  return std::min(1.0, std::exp(special::log_sum_exp(terms)));
}

double prob_a_beats_b_exact(const TrialTable& table, bool force) {
  const Count n = table.total_trials();
  if (n > kExactModeCap && !force) {
    throw Error(ErrorCode::kTooLarge,
                "N = " + std::to_string(n) +
                    " exceeds the exact-mode cap; use the normal method or force");
  }
  const Count sa = table.successes_a;
  const Count fa = table.failures_a();
  const Count s = table.successes_a + table.successes_b;
  const Count f = table.failures_a() + table.failures_b();
  // C(F-j, F_A) vanishes for j > F_B, so the sum runs over j = 0..F_B.
  std::vector<double> terms;
  terms.reserve(table.failures_b() + 1);
  for (Count j = 0; j <= table.failures_b(); ++j) {
    terms.push_back(special::log_binomial(s + 1 + j, sa) + special::log_binomial(f - j, fa));
  }
  const double log_norm = special::log_binomial(n + 2, table.trials_a + 1);
  return std::clamp(std::exp(special::log_sum_exp(terms) - log_norm), 0.0, 1.0);
}

PosteriorMoments posterior_diff_moments(const TrialTable& table) {
  using Wide = __int128;
  const auto arm_var = [](Count s, Count n) {
    const Wide num = Wide(s + 1) * Wide(n + 1 - s);
    const Wide den = Wide(n + 1) * Wide(n + 1) * Wide(n + 2);
    return static_cast<double>(num) / static_cast<double>(den);
  };
  // Single rounding of the difference: combine over the common denominator.
  const Wide mean_num = Wide(table.successes_a + 1) * Wide(table.trials_b + 1) -
                        Wide(table.successes_b + 1) * Wide(table.trials_a + 1);
  const Wide mean_den = Wide(table.trials_a + 1) * Wide(table.trials_b + 1);
  return PosteriorMoments{
      static_cast<double>(mean_num) / static_cast<double>(mean_den),
      arm_var(table.successes_a, table.trials_a) + arm_var(table.successes_b, table.trials_b),
  };
}

}  // namespace simpson::bayes
