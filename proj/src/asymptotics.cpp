#include "simpson/asymptotics.hpp"

#include <cmath>

#include "simpson/error.hpp"
#include "simpson/special_fn.hpp"

namespace simpson::asymptotics {
namespace {

bool degenerate(Count successes, Count trials) {
  return successes == 0 || successes == trials;
}

std::optional<NormalStatistics> statistics_for(const TrialTable& table) {
  const RatePair r = rates(table);
  const double n = r.n_a + r.n_b;
  const double var = weighted_variance(r.p_a, r.n_a, r.p_b, r.n_b, n);
  if (!(var > 0.0)) return std::nullopt;
  const double sigma = std::sqrt(var);
  const double c = (r.p_a - r.p_b) / sigma;
  return NormalStatistics{c, sigma, std::sqrt(n) * c};
}

}  // namespace

std::string_view to_string(Method m) {
  return m == Method::kExact ? "EXACT" : "NORMAL";
}

double significance_limit(double s) { return special::std_normal_cdf(-2.0 * s); }

double weighted_variance(double p_a, double n_a, double p_b, double n_b, double n_total) {
  return p_a * (1.0 - p_a) / (n_a / n_total) + p_b * (1.0 - p_b) / (n_b / n_total);
}

ComparisonResult prob_a_beats_b_normal(const TrialTable& table) {
  if (degenerate(table.successes_a, table.trials_a) ||
      degenerate(table.successes_b, table.trials_b)) {
    throw Error(ErrorCode::kDegenerateRate,
                "normal approximation needs 0 < S < N on both arms; use the exact method");
  }
  const auto stats = statistics_for(table);
  return ComparisonResult{special::std_normal_cdf(stats->z), Method::kNormal, stats};
}

bayes::PosteriorMoments rate_diff_moments(double p_a, double p_b, Count n_a, Count n_b) {
  if (n_a == 0 || n_b == 0) throw Error(ErrorCode::kDomain, "counts must be >= 1");
  return bayes::PosteriorMoments{
      p_a - p_b,
      p_a * (1.0 - p_a) / static_cast<double>(n_a) + p_b * (1.0 - p_b) / static_cast<double>(n_b),
  };
}

double interval_prob_normal(double p, double epsilon) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorCode::kDegenerateRate, "interval_prob_normal requires 0 < p < 1");
  }
  if (!(epsilon >= 0.0)) throw Error(ErrorCode::kDomain, "epsilon must be >= 0");
  const double x = epsilon / std::sqrt(p * (1.0 - p));
  // 1 - 2 Phi(-x) avoids subtracting two numbers near 1.
  return 1.0 - 2.0 * special::std_normal_cdf(-x);
}

ComparisonResult aggregate_confidence(const TrialTable& table) {
  if (degenerate(table.successes_a, table.trials_a) ||
      degenerate(table.successes_b, table.trials_b)) {
    throw Error(ErrorCode::kDegenerateRate, "aggregate confidence needs both rates in (0,1)");
  }
  if (direction(table) == Direction::kTie) {
    throw Error(ErrorCode::kTie, "P_A = P_B: no direction to assert");
  }
  const auto stats = statistics_for(table);
  return ComparisonResult{special::std_normal_cdf(stats->z), Method::kNormal, stats};
}

SubtrialConfidence subtrial_confidence(const FractionalTable& sub, double n_total,
                                       int part_index) {
  if (!(n_total >= sub.trials_a + sub.trials_b) || !(sub.trials_a > 0.0) ||
      !(sub.trials_b > 0.0)) {
    throw Error(ErrorCode::kDomain, "n_total must cover the part's trials");
  }
  const double p_a = sub.rate_a();
  const double p_b = sub.rate_b();
  const double var = weighted_variance(p_a, sub.trials_a, p_b, sub.trials_b, n_total);
  if (!(var > 0.0)) {
    throw Error(ErrorCode::kDegenerateRate, "part has zero variance (both rates at 0 or 1)");
  }
  const double sigma = std::sqrt(var);
  const double c = (p_b - p_a) / sigma;
  return SubtrialConfidence{c, sigma, std::sqrt(n_total) * c, part_index};
}

ComparisonResult exact_comparison(const TrialTable& table, bool force) {
  return ComparisonResult{bayes::prob_a_beats_b_exact(table, force), Method::kExact,
                          statistics_for(table)};
}

ComparisonResult best_comparison(const TrialTable& table, bool force) {
  if (degenerate(table.successes_a, table.trials_a) ||
      degenerate(table.successes_b, table.trials_b)) {
    return exact_comparison(table, force);
  }
  return prob_a_beats_b_normal(table);
}

}  // namespace simpson::asymptotics
