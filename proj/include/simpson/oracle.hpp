#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "simpson/core_model.hpp"
#include "simpson/decompose.hpp"

// Independent verifiers for the exact comparator and the reversal search.
// They share no code path with the routines they check beyond the special
// functions.
namespace simpson::oracle {

enum class OracleMethod { kQuadrature, kRational, kMonteCarlo, kGrid };

std::string_view to_string(OracleMethod m);

struct OracleReport {
  double value = 0.0;
  OracleMethod method = OracleMethod::kQuadrature;
  // Upper bound on |value - truth| for quadrature and rational; a
  // 3-standard-error half width for Monte Carlo.
  double error_estimate = 0.0;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> exact;                  // "num/den", rational only
  std::optional<decompose::SplitFractions> split;    // grid only
  std::optional<std::uint64_t> samples;              // Monte Carlo only
};

inline constexpr Count kQuadratureCap = 200;
// Big-integer arithmetic lifts the small-word limit of N <= 12.
inline constexpr Count kRationalCap = 400;
inline constexpr Count kMinMonteCarloSamples = 10'000;
inline constexpr int kMaxGridLattice = 41;

/// Nested quadrature of the posterior: the inner integral over p_B is an
/// incomplete beta, the outer one adaptive Gauss-Kronrod (7/15) to 1e-12.
/// Throws Error{kTooLarge} for N > kQuadratureCap.
OracleReport prob_a_beats_b_quadrature(const TrialTable& table);

/// The finite sum for Pr(p_A >= p_B) in exact rational arithmetic.
/// Throws Error{kTooLarge} for N > kRationalCap.
OracleReport prob_a_beats_b_rational(const TrialTable& table);

/// Posterior sampling. Generator: std::mt19937_64 seeded with `seed`; one
/// stream, drawing p_A then p_B per sample. Uniforms are the top 53 bits
/// scaled by 2^-53; normals by Box-Muller (cosine branch only); Gamma by
/// Marsaglia-Tsang; Beta(a, b) = X / (X + Y). The error estimate uses
/// p~ = (k + 1/2) / (n + 1) so that it never collapses to zero.
/// Throws Error{kDomain} for fewer than kMinMonteCarloSamples samples.
OracleReport prob_a_beats_b_montecarlo(const TrialTable& table, std::uint64_t samples,
                                       std::uint64_t seed);

/// Exhaustive (alpha, beta) sweep over i/(lattice+1) with c' bisection at
/// every point. Returns 0 when no split admits a positive c'.
/// Throws Error{kDomain} for lattice > kMaxGridLattice.
OracleReport maximize_reversal_grid(const TrialTable& table, int lattice);

}  // namespace simpson::oracle
