#include "simpson/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "simpson/error.hpp"

namespace simpson::decompose {
namespace {

using asymptotics::SubtrialConfidence;

// Past this the search stops doubling; a common c' this large would mean
// z-scores in the thousands for any realistic N.
constexpr double kCPrimeCap = 1e3;
constexpr double kWholeSlack = 1e-6;

bool in_open_unit(double x) { return x > 0.0 && x < 1.0; }

// Reversal needs A strictly ahead with both aggregate rates in (0,1).
void require_reversible(const TrialTable& table) {
  const RatePair r = rates(table);
  if (!in_open_unit(r.p_a) || !in_open_unit(r.p_b)) {
    throw Error(ErrorCode::kDegenerateRate, "reversal needs both aggregate rates in (0,1)");
  }
  switch (direction(table)) {
    case Direction::kTie:
      throw Error(ErrorCode::kTie, "P_A = P_B: there is no conclusion to reverse");
    case Direction::kBAhead:
      throw Error(ErrorCode::kDomain, "B is ahead; swap the arms so that A leads");
    case Direction::kAAhead:
      break;
  }
}

void require_rates_ordered(const RatePair& r) {
  if (!in_open_unit(r.p_a) || !in_open_unit(r.p_b)) {
    throw Error(ErrorCode::kDegenerateRate, "rates must lie in (0,1)");
  }
  if (r.p_a == r.p_b) throw Error(ErrorCode::kTie, "P_A = P_B");
  if (r.p_a < r.p_b) throw Error(ErrorCode::kDomain, "expected P_A > P_B");
}

double clamped_variance(double p) {
  const double c = std::clamp(p, 0.0, 1.0);
  return c * (1.0 - c);
}

enum class SolveStatus { kOk, kInfeasible, kNoConvergence };

// The sub-rates as an affine function of the two part sigmas.
struct RateSystem {
  double alpha, beta, c_prime, k1, k2;
  // N_xi / N weights of the four cells.
  double w_a1, w_b1, w_a2, w_b2;

  struct SubRates {
    double a1, a2, b1, b2;
  };

  SubRates at(double s1, double s2) const {
    const double gap = alpha - beta;
    const double s_alpha = alpha * s1 + (1.0 - alpha) * s2;
    const double s_beta = beta * s1 + (1.0 - beta) * s2;
    return SubRates{
        k1 + (1.0 - alpha) / gap * c_prime * s_beta,
        k2 - alpha / gap * c_prime * s_beta,
        k1 + (1.0 - beta) / gap * c_prime * s_alpha,
        k2 - beta / gap * c_prime * s_alpha,
    };
  }

  std::array<double, 2> sigmas(const SubRates& p) const {
    return {std::sqrt(clamped_variance(p.a1) / w_a1 + clamped_variance(p.b1) / w_b1),
            std::sqrt(clamped_variance(p.a2) / w_a2 + clamped_variance(p.b2) / w_b2)};
  }
};

SolveStatus try_solve(const TrialTable& table, double alpha, double beta, double c_prime,
                      const SolverOptions& options, ReversalSolution& out) {
  const RatePair r = rates(table);
  const double gap = alpha - beta;
  const RateSystem system{
      alpha,
      beta,
      c_prime,
      ((1.0 - beta) * r.p_a - (1.0 - alpha) * r.p_b) / gap,
      (alpha * r.p_b - beta * r.p_a) / gap,
      alpha * r.gamma,
      beta * (1.0 - r.gamma),
      (1.0 - alpha) * r.gamma,
      (1.0 - beta) * (1.0 - r.gamma),
  };

  std::array<double, 2> sigma = {1.0, 1.0};
  std::array<double, 2> last_step = {0.0, 0.0};
  double weight = 1.0;
  bool converged = false;
  int iteration = 0;
  while (iteration < options.max_iterations) {
    ++iteration;
    const auto next = system.sigmas(system.at(sigma[0], sigma[1]));
    const std::array<double, 2> step = {next[0] - sigma[0], next[1] - sigma[1]};
    if (std::max(std::fabs(step[0]), std::fabs(step[1])) < options.tolerance) {
      sigma = next;
      converged = true;
      break;
    }
    if (step[0] * last_step[0] < 0.0 || step[1] * last_step[1] < 0.0) {
      weight = options.damping;
    }
    last_step = step;
    sigma[0] += weight * step[0];
    sigma[1] += weight * step[1];
  }

  DecompositionPlan& plan = out.plan;
  const auto p = system.at(sigma[0], sigma[1]);
  plan = DecompositionPlan{
      alpha,
      beta,
      c_prime,
      system.k1,
      system.k2,
      sigma[0],
      sigma[1],
      alpha * sigma[0] + (1.0 - alpha) * sigma[1],
      beta * sigma[0] + (1.0 - beta) * sigma[1],
      p.a1,
      p.a2,
      p.b1,
      p.b2,
      iteration,
      weight != 1.0,
  };
  // Out-of-range sub-rates mean infeasible whether or not sigma settled:
  // the clamped variances can keep an infeasible iteration cycling forever.
  for (double rate : {p.a1, p.a2, p.b1, p.b2}) {
    if (!(rate >= 0.0 && rate <= 1.0)) return SolveStatus::kInfeasible;
  }
  if (!converged) return SolveStatus::kNoConvergence;

  // Part 2 is built as the remainder so that merging reproduces the source.
  const auto n_a = static_cast<double>(table.trials_a);
  const auto n_b = static_cast<double>(table.trials_b);
  const auto s_a = static_cast<double>(table.successes_a);
  const auto s_b = static_cast<double>(table.successes_b);
  const double n_a1 = alpha * n_a;
  const double n_b1 = beta * n_b;
  const double s_a1 = p.a1 * n_a1;
  const double s_b1 = p.b1 * n_b1;
  const double n_a2 = n_a - n_a1;
  const double n_b2 = n_b - n_b1;
  out.parts = {
      FractionalTable{s_a1, n_a1, s_b1, n_b1},
      FractionalTable{std::clamp(s_a - s_a1, 0.0, n_a2), n_a2,
                      std::clamp(s_b - s_b1, 0.0, n_b2), n_b2},
  };

  const double n_total = n_a + n_b;
  bool verified = plan.p_b1 >= plan.p_a1 && plan.p_b2 >= plan.p_a2;
  for (int i = 0; i < 2; ++i) {
    try {
      out.realized[i] = asymptotics::subtrial_confidence(out.parts[i], n_total, i + 1);
      verified = verified && out.realized[i].c_prime >= c_prime - kVerificationSlack;
    } catch (const Error&) {
      out.realized[i] = SubtrialConfidence{0.0, 0.0, 0.0, i + 1};
      verified = false;
    }
  }
  out.verified = verified;
  return SolveStatus::kOk;
}

bool verifies_at(const TrialTable& table, double alpha, double beta, double c_prime) {
  ReversalSolution scratch;
  return try_solve(table, alpha, beta, c_prime, SolverOptions{}, scratch) == SolveStatus::kOk &&
         scratch.verified;
}

Count half_up(double x) {
  const double r = std::floor(x + 0.5);
  return r <= 0.0 ? 0 : static_cast<Count>(r);
}

Count whole_total(double x, const char* what) {
  const double r = std::round(x);
  if (r < 0.0 || std::fabs(x - r) > kWholeSlack) {
    throw Error(ErrorCode::kDomain, std::string(what) + " totals are not whole numbers");
  }
  return static_cast<Count>(r);
}

// Rounds one arm of a two-part split; returns {s1, n1, s2, n2}.
std::array<Count, 4> round_arm(double s1, double n1, double s2, double n2, const char* arm) {
  const Count n_total = whole_total(n1 + n2, arm);
  const Count s_total = whole_total(s1 + s2, arm);
  if (n_total < 2) {
    throw Error(ErrorCode::kDegenerate,
                std::string("arm ") + arm + " has fewer than two trials to split");
  }
  const Count n1_int = std::clamp<Count>(half_up(n1), 1, n_total - 1);
  const Count n2_int = n_total - n1_int;
  const Count s_lo = s_total > n2_int ? s_total - n2_int : 0;
  const Count s_hi = std::min(n1_int, s_total);
  const Count s1_int = std::clamp<Count>(half_up(s1), s_lo, s_hi);
  return {s1_int, n1_int, s_total - s1_int, n2_int};
}

}  // namespace

SplitFractions neutralizing_fractions(const RatePair& r, double lambda, double mu) {
  if (!(lambda >= 0.0 && lambda <= 1.0 && mu >= 0.0 && mu <= 1.0)) {
    throw Error(ErrorCode::kPlacement, "lambda and mu must lie in [0,1]");
  }
  if (r.p_a == r.p_b) throw Error(ErrorCode::kTie, "P_A = P_B: nothing to neutralize");
  const double lo = std::min(lambda, mu);
  const double hi = std::max(lambda, mu);
  const auto inside = [&](double p) { return p > lo && p < hi; };
  if (!inside(r.p_a) || !inside(r.p_b)) {
    throw Error(ErrorCode::kPlacement,
                "both aggregate rates must lie strictly between lambda and mu");
  }
  // Written on counts, (mu N - S) / ((mu - lambda) N), to keep decimal inputs exact.
  const double alpha = (mu * r.n_a - r.p_a * r.n_a) / ((mu - lambda) * r.n_a);
  const double beta = (mu * r.n_b - r.p_b * r.n_b) / ((mu - lambda) * r.n_b);
  return SplitFractions{alpha, beta};
}

Parts neutralize(const TrialTable& table, double lambda, double mu) {
  if (direction(table) == Direction::kTie) {
    throw Error(ErrorCode::kTie, "P_A = P_B: nothing to neutralize");
  }
  const RatePair r = rates(table);
  neutralizing_fractions(r, lambda, mu);  // validates placement
  const auto s_a = static_cast<double>(table.successes_a);
  const auto s_b = static_cast<double>(table.successes_b);
  const double n_a1 = (mu * r.n_a - s_a) / (mu - lambda);
  const double n_b1 = (mu * r.n_b - s_b) / (mu - lambda);
  const double s_a1 = lambda * n_a1;
  const double s_b1 = lambda * n_b1;
  const double n_a2 = r.n_a - n_a1;
  const double n_b2 = r.n_b - n_b1;
  return Parts{
      FractionalTable{s_a1, n_a1, s_b1, n_b1},
      FractionalTable{std::clamp(s_a - s_a1, 0.0, n_a2), n_a2,
                      std::clamp(s_b - s_b1, 0.0, n_b2), n_b2},
  };
}

AveragingRates suggest_lambda_mu(const TrialTable& table) {
  if (direction(table) == Direction::kTie) throw Error(ErrorCode::kTie, "P_A = P_B");
  const RatePair r = rates(table);
  const double low = std::min(r.p_a, r.p_b);
  const double high = std::max(r.p_a, r.p_b);
  const AveragingRates suggestion{low / 2.0, (high + 1.0) / 2.0};
  if (!(suggestion.lambda < low) || !(suggestion.mu > high)) {
    throw Error(ErrorCode::kPlacement, "no room for lambda below or mu above the rates");
  }
  return suggestion;
}

ReversalSolution solve_reversal(const TrialTable& table, double alpha, double beta,
                                double c_prime, const SolverOptions& options) {
  require_reversible(table);
  if (!in_open_unit(alpha) || !in_open_unit(beta)) {
    throw Error(ErrorCode::kDomain, "alpha and beta must lie in (0,1)");
  }
  if (alpha == beta) throw Error(ErrorCode::kDegenerate, "alpha = beta leaves K undefined");
  if (!(c_prime >= 0.0)) throw Error(ErrorCode::kDomain, "c_prime must be >= 0");
  if (!necessary_feasible(rates(table), alpha, beta)) {
    throw Error(ErrorCode::kInfeasible, "split fails the sign conditions for c' >= 0");
  }
  ReversalSolution solution;
  switch (try_solve(table, alpha, beta, c_prime, options, solution)) {
    case SolveStatus::kOk:
      return solution;
    case SolveStatus::kInfeasible:
      throw Error(ErrorCode::kInfeasible, "a sub-rate leaves [0,1] at the fixed point");
    case SolveStatus::kNoConvergence:
      throw Error(ErrorCode::kNoConvergence,
                  "sigma iteration did not settle in " +
                      std::to_string(options.max_iterations) + " iterations");
  }
  return solution;
}

bool necessary_feasible(const RatePair& r, double alpha, double beta) {
  if (!in_open_unit(r.p_a) || !in_open_unit(r.p_b) || !(r.p_a > r.p_b)) return false;
  if (!in_open_unit(alpha) || !in_open_unit(beta)) return false;
  const double qa = 1.0 - r.p_a;
  const double qb = 1.0 - r.p_b;
  // Cross-multiplied ratio conditions, no division by a vanishing fraction.
  if (alpha >= beta) {
    return alpha * r.p_b >= beta * r.p_a && (1.0 - beta) * qa >= (1.0 - alpha) * qb;
  }
  return (1.0 - alpha) * r.p_b >= (1.0 - beta) * r.p_a && beta * qa >= alpha * qb;
}

double cprime_ceiling_exact(const RatePair& r, double alpha, double beta, double sigma_alpha,
                            double sigma_beta) {
  const double qa = 1.0 - r.p_a;
  const double qb = 1.0 - r.p_b;
  const double abar = 1.0 - alpha;
  const double bbar = 1.0 - beta;
  double upper = 0.0;
  double lower = 0.0;
  if (alpha >= beta) {
    upper = bbar * qa - abar * qb;        // (alpha - beta)(1 - K1)
    lower = alpha * r.p_b - beta * r.p_a;  // (alpha - beta) K2
    return std::min({upper / (abar * sigma_beta), upper / (bbar * sigma_alpha),
                     lower / (alpha * sigma_beta), lower / (beta * sigma_alpha)});
  }
  lower = abar * r.p_b - bbar * r.p_a;  // (beta - alpha) K1
  upper = beta * qa - alpha * qb;       // (beta - alpha)(1 - K2)
  return std::min({lower / (abar * sigma_beta), lower / (bbar * sigma_alpha),
                   upper / (alpha * sigma_beta), upper / (beta * sigma_alpha)});
}

double cprime_ceiling_sufficient(const RatePair& r, double alpha, double beta) {
  const double qa = 1.0 - r.p_a;
  const double qb = 1.0 - r.p_b;
  const double abar = 1.0 - alpha;
  const double bbar = 1.0 - beta;
  // 1 / max sigma, with p(1-p) <= 1/4 in every cell.
  const double inv_sigma_max = 2.0 * std::sqrt(r.gamma * (1.0 - r.gamma));
  if (alpha >= beta) {
    return inv_sigma_max * std::sqrt(std::min(beta, abar)) *
           std::min((bbar * qa - abar * qb) / bbar, (alpha * r.p_b - beta * r.p_a) / alpha);
  }
  return inv_sigma_max * std::sqrt(std::min(alpha, bbar)) *
         std::min((abar * r.p_b - bbar * r.p_a) / abar, (beta * qa - alpha * qb) / beta);
}

SplitFractions special_alpha_beta(const RatePair& r) {
  require_rates_ordered(r);
  const double ratio_sq = (r.p_a / r.p_b) * (r.p_a / r.p_b);
  const double qratio_sq = ((1.0 - r.p_b) / (1.0 - r.p_a)) * ((1.0 - r.p_b) / (1.0 - r.p_a));
  const double denom = ratio_sq * qratio_sq - 1.0;
  const double beta = (qratio_sq - 1.0) / denom;
  return SplitFractions{ratio_sq * beta, beta};
}

double cprime_ceiling_printed(const RatePair& r) {
  require_rates_ordered(r);
  const double pa = r.p_a;
  const double pb = r.p_b;
  const double ratio = pa / pb;
  const double qratio = (1.0 - pb) / (1.0 - pa);
  const double denom = (ratio * qratio) * (ratio * qratio) - 1.0;
  const double scale = 2.0 * std::sqrt(r.gamma * (1.0 - r.gamma));
  if (pa + pb >= 1.0) {
    return scale * (qratio * qratio - 1.0) * (pa - pb) * (pb / pa) / denom;
  }
  return scale * (ratio * ratio - 1.0) * (pa - pb) * ((1.0 - pa) / (1.0 - pb)) / denom;
}

std::optional<double> max_verified_cprime(const TrialTable& table, double alpha, double beta,
                                          double tolerance) {
  const RatePair r = rates(table);
  if (alpha == beta || !necessary_feasible(r, alpha, beta)) return std::nullopt;
  if (!verifies_at(table, alpha, beta, 0.0)) return std::nullopt;

  double lo = 0.0;
  double hi = std::max(cprime_ceiling_sufficient(r, alpha, beta), 0.0);
  if (hi > 0.0 && verifies_at(table, alpha, beta, hi)) {
    lo = hi;
    hi *= 2.0;
  } else if (hi == 0.0) {
    hi = 1e-3;
  }
  while (hi <= kCPrimeCap && verifies_at(table, alpha, beta, hi)) {
    lo = hi;
    hi *= 2.0;
  }
  if (hi > kCPrimeCap) return lo;
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (verifies_at(table, alpha, beta, mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

ReversalSolution maximize_reversal(const TrialTable& table, const SearchOptions& options) {
  if (direction(table) == Direction::kTie) {
    throw Error(ErrorCode::kInfeasible, "P_A = P_B: no split can reverse a tie");
  }
  require_reversible(table);
  const RatePair r = rates(table);

  struct Incumbent {
    double alpha = 0.0;
    double beta = 0.0;
    double c_prime = -1.0;
  } best;
  const auto consider = [&](double alpha, double beta) {
    if (!in_open_unit(alpha) || !in_open_unit(beta)) return;
    const auto c = max_verified_cprime(table, alpha, beta, options.bisection_tolerance);
    if (c && *c > best.c_prime) best = Incumbent{alpha, beta, *c};
  };

  // The closed-form split seeds the search so the result never falls below it.
  const SplitFractions special = special_alpha_beta(r);
  consider(special.alpha, special.beta);

  double spacing = 1.0 / (options.lattice + 1);
  for (int i = 1; i <= options.lattice; ++i) {
    for (int j = 1; j <= options.lattice; ++j) consider(i * spacing, j * spacing);
  }
  for (int pass = 0; pass < options.refinement_passes; ++pass) {
    spacing /= 10.0;
    const Incumbent center = best;
    if (center.c_prime < 0.0) break;
    const int w = options.refinement_half_width;
    for (int i = -w; i <= w; ++i) {
      for (int j = -w; j <= w; ++j) {
        consider(center.alpha + i * spacing, center.beta + j * spacing);
      }
    }
  }
  if (!(best.c_prime > 0.0)) {
    throw Error(ErrorCode::kInfeasible, "no split admits a positive common confidence");
  }
  return solve_reversal(table, best.alpha, best.beta, best.c_prime);
}

IntegerSplit integerize(const Parts& parts, std::optional<double> target_c_prime) {
  const auto a = round_arm(parts[0].successes_a, parts[0].trials_a, parts[1].successes_a,
                           parts[1].trials_a, "A");
  const auto b = round_arm(parts[0].successes_b, parts[0].trials_b, parts[1].successes_b,
                           parts[1].trials_b, "B");
  IntegerSplit split{
      {make_table(a[0], a[1], b[0], b[1]), make_table(a[2], a[3], b[2], b[3])},
      {},
      false,
      false,
  };
  const auto n_total =
      static_cast<double>(split.parts[0].total_trials() + split.parts[1].total_trials());
  bool meets = target_c_prime.has_value();
  for (int i = 0; i < 2; ++i) {
    try {
      split.realized[i] =
          asymptotics::subtrial_confidence(to_fractional(split.parts[i]), n_total, i + 1);
      if (target_c_prime) {
        meets = meets && split.realized[i]->c_prime >= *target_c_prime - kVerificationSlack;
      }
    } catch (const Error&) {
      meets = false;
    }
  }
  split.reversal_holds = direction(split.parts[0]) == Direction::kBAhead &&
                         direction(split.parts[1]) == Direction::kBAhead;
  split.meets_target = meets;
  return split;
}

}  // namespace simpson::decompose
