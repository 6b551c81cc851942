#pragma once

#include <cstdint>
#include <span>

namespace simpson::special {

/// Natural log of a non-negative quantity; -infinity encodes zero.
struct LogProb {
  double value;

  double exp() const;
};

/// ln Gamma(x) for x > 0 (Lanczos, g = 7, nine coefficients).
/// Throws Error{kDomain} for x <= 0.
double log_gamma(double x);

/// ln B(a, b) for a, b > 0. Uses a Stirling expansion with Bernoulli
/// corrections when both arguments are >= 10 so that large symmetric
/// arguments do not lose digits to cancellation.
double log_beta(double a, double b);

/// ln C(n, k). Exact table for n <= 60. Throws Error{kDomain} if k > n.
double log_binomial(std::uint64_t n, std::uint64_t k);

/// I_x(a, b), the regularized incomplete beta function.
/// Throws Error{kDomain} on bad arguments and Error{kNoConvergence} if the
/// continued fraction does not settle within 500 terms.
double regularized_incomplete_beta(double x, double a, double b);

/// Phi(x), the standard normal CDF.
double std_normal_cdf(double x);

/// Standard normal density.
double std_normal_pdf(double x);

/// log(sum(exp(terms))) with a running maximum and compensated summation.
/// Returns -infinity for an empty span or all -infinity terms.
double log_sum_exp(std::span<const double> terms);

}  // namespace simpson::special
