#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "simpson/core_model.hpp"

namespace simpson::testing {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Portable draws: raw mt19937_64 output reduced by modulo, so the same seed
// gives the same tables on every standard library.
class TableGen {
 public:
  explicit TableGen(std::uint64_t seed) : rng_(seed) {}

  Count uniform(Count lo, Count hi) { return lo + rng_() % (hi - lo + 1); }

  double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  // Arms with 1..max_trials trials each and any success count.
  TrialTable table(Count max_trials) {
    const Count na = uniform(1, max_trials);
    const Count nb = uniform(1, max_trials);
    return make_table(uniform(0, na), na, uniform(0, nb), nb);
  }

  // Total trials at most max_total, both arms with at least one trial.
  TrialTable table_with_total(Count max_total) {
    const Count total = uniform(2, max_total);
    const Count na = uniform(1, total - 1);
    const Count nb = total - na;
    return make_table(uniform(0, na), na, uniform(0, nb), nb);
  }

  // Rates strictly inside (0,1) on both arms and P_A > P_B.
  TrialTable reversible(Count min_trials, Count max_trials) {
    for (;;) {
      const Count na = uniform(min_trials, max_trials);
      const Count nb = uniform(min_trials, max_trials);
      const TrialTable t = make_table(uniform(1, na - 1), na, uniform(1, nb - 1), nb);
      if (direction(t) == Direction::kAAhead) return t;
      if (direction(t) == Direction::kBAhead) return swap_arms(t);
    }
  }

 private:
  std::mt19937_64 rng_;
};

inline BigInt binom(unsigned n, unsigned k) {
  BigInt r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Polynomial in x with rational coefficients, index = power.
using Poly = std::vector<Rational>;

inline Poly multiply(const Poly& p, const Poly& q) {
  Poly out(p.size() + q.size() - 1, Rational(0));
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < q.size(); ++j) out[i + j] += p[i] * q[j];
  }
  return out;
}

inline Poly power_of_one_minus_x(unsigned n) {
  Poly out(n + 1);
  for (unsigned k = 0; k <= n; ++k) {
    out[k] = Rational(binom(n, k)) * ((k % 2 == 0) ? 1 : -1);
  }
  return out;
}

// Pr(p_A > p_B) under uniform priors, by expanding the integrand
// f_A(x) F_B(x) into monomials and integrating each exactly.
inline Rational prob_a_beats_b_polynomial(const TrialTable& t) {
  const unsigned sa = static_cast<unsigned>(t.successes_a);
  const unsigned fa = static_cast<unsigned>(t.failures_a());
  const unsigned nb = static_cast<unsigned>(t.trials_b);
  const unsigned sb = static_cast<unsigned>(t.successes_b);

  // Beta(sa+1, fa+1) density.
  Poly density = power_of_one_minus_x(fa);
  density.insert(density.begin(), sa, Rational(0));
  const Rational norm = Rational(binom(sa + fa, sa)) * (sa + fa + 1);
  for (auto& c : density) c *= norm;

  // Beta(sb+1, fb+1) CDF as the upper binomial tail of order nb+1.
  Poly cdf(nb + 2, Rational(0));
  for (unsigned j = sb + 1; j <= nb + 1; ++j) {
    Poly term = power_of_one_minus_x(nb + 1 - j);
    term.insert(term.begin(), j, Rational(0));
    for (std::size_t k = 0; k < term.size(); ++k) cdf[k] += Rational(binom(nb + 1, j)) * term[k];
  }

  const Poly integrand = multiply(density, cdf);
  Rational total = 0;
  for (std::size_t k = 0; k < integrand.size(); ++k) total += integrand[k] / Rational(k + 1);
  return total;
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace simpson::testing
