#include "simpson/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <random>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "simpson/error.hpp"
#include "simpson/special_fn.hpp"

namespace simpson::oracle {
namespace {

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1] (QUADPACK qk15).
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
};

struct Segment {
  double lo, hi, value, error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

template <typename F>
Segment kronrod15(const F& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kWgk[j] * pair;
    if (j % 2 == 1) gauss += kWg[j / 2] * pair;
  }
  return Segment{lo, hi, kronrod * half, std::fabs((kronrod - gauss) * half)};
}

// Global adaptive bisection on the segment with the largest error.
template <typename F>
std::pair<double, double> integrate(const F& f, double lo, double hi, double tolerance,
                                    int initial_pieces, int max_segments) {
  std::priority_queue<Segment> heap;
  double total = 0.0;
  double error = 0.0;
  const double width = (hi - lo) / initial_pieces;
  for (int i = 0; i < initial_pieces; ++i) {
    const double a = lo + i * width;
    const double b = i + 1 == initial_pieces ? hi : a + width;
    const Segment s = kronrod15(f, a, b);
    total += s.value;
    error += s.error;
    heap.push(s);
  }
  int segments = initial_pieces;
  while (error > tolerance && segments < max_segments) {
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    const Segment left = kronrod15(f, worst.lo, mid);
    const Segment right = kronrod15(f, mid, worst.hi);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++segments;
  }
  // Re-add from scratch to shed accumulated rounding in the running sums.
  total = 0.0;
  error = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  return {total, error};
}

double log_power(Count k, double log_x) {
  return k == 0 ? 0.0 : static_cast<double>(k) * log_x;
}

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

cpp_int binomial(Count n, Count k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  cpp_int result = 1;
  for (Count i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;
  }
  return result;
}

// Top 53 bits of the engine output as a double in [0, 1).
double uniform01(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

double standard_normal(std::mt19937_64& engine) {
  constexpr double kTwoPi = 6.283185307179586476925;
  const double u1 = 1.0 - uniform01(engine);  // (0, 1]
  const double u2 = uniform01(engine);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

// Marsaglia-Tsang for shape >= 1.
double gamma_variate(double shape, std::mt19937_64& engine) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double x = standard_normal(engine);
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = 1.0 - uniform01(engine);
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double beta_variate(double a, double b, std::mt19937_64& engine) {
  const double x = gamma_variate(a, engine);
  const double y = gamma_variate(b, engine);
  return x / (x + y);
}

bool reversible(const TrialTable& table) {
  const RatePair r = rates(table);
  return r.p_a > 0.0 && r.p_a < 1.0 && r.p_b > 0.0 && r.p_b < 1.0 &&
         direction(table) == Direction::kAAhead;
}

}  // namespace

std::string_view to_string(OracleMethod m) {
  switch (m) {
    case OracleMethod::kQuadrature: return "QUADRATURE";
    case OracleMethod::kRational: return "RATIONAL";
    case OracleMethod::kMonteCarlo: return "MONTE_CARLO";
    case OracleMethod::kGrid: return "GRID";
  }
  return "QUADRATURE";
}

OracleReport prob_a_beats_b_quadrature(const TrialTable& table) {
  if (table.total_trials() > kQuadratureCap) {
    throw Error(ErrorCode::kTooLarge, "quadrature oracle is limited to N <= 200");
  }
  const Count sa = table.successes_a;
  const Count fa = table.failures_a();
  const double b_shape_s = static_cast<double>(table.successes_b) + 1.0;
  const double b_shape_f = static_cast<double>(table.failures_b()) + 1.0;
  const double log_norm = special::log_beta(static_cast<double>(sa) + 1.0,
                                            static_cast<double>(fa) + 1.0);
  // Posterior density of p_A times Pr(p_B <= p_A).
  const auto integrand = [&](double p) {
    const double log_density = log_power(sa, std::log(p)) + log_power(fa, std::log1p(-p)) -
                               log_norm;
    return std::exp(log_density) * special::regularized_incomplete_beta(p, b_shape_s, b_shape_f);
  };
  const auto [value, error] = integrate(integrand, 0.0, 1.0, 1e-12, 32, 4000);
  OracleReport report;
  report.value = std::clamp(value, 0.0, 1.0);
  report.method = OracleMethod::kQuadrature;
  report.error_estimate = error;
  return report;
}

OracleReport prob_a_beats_b_rational(const TrialTable& table) {
  const Count n = table.total_trials();
  if (n > kRationalCap) {
    throw Error(ErrorCode::kTooLarge, "rational oracle is limited to N <= 400");
  }
  const Count sa = table.successes_a;
  const Count fa = table.failures_a();
  const Count s = table.successes_a + table.successes_b;
  const Count f = table.failures_a() + table.failures_b();
  cpp_int numerator = 0;
  for (Count j = 0; j <= f; ++j) numerator += binomial(s + 1 + j, sa) * binomial(f - j, fa);
  const cpp_rational exact(numerator, binomial(n + 2, table.trials_a + 1));

  OracleReport report;
  report.value = static_cast<double>(exact);
  report.method = OracleMethod::kRational;
  report.error_estimate = 0.0;
  report.exact = boost::multiprecision::numerator(exact).str() + "/" +
                 boost::multiprecision::denominator(exact).str();
  return report;
}

OracleReport prob_a_beats_b_montecarlo(const TrialTable& table, std::uint64_t samples,
                                       std::uint64_t seed) {
  if (samples < kMinMonteCarloSamples) {
    throw Error(ErrorCode::kDomain, "Monte Carlo needs at least 10^4 samples");
  }
  std::mt19937_64 engine(seed);
  const double a_s = static_cast<double>(table.successes_a) + 1.0;
  const double a_f = static_cast<double>(table.failures_a()) + 1.0;
  const double b_s = static_cast<double>(table.successes_b) + 1.0;
  const double b_f = static_cast<double>(table.failures_b()) + 1.0;
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    const double p_a = beta_variate(a_s, a_f, engine);
    const double p_b = beta_variate(b_s, b_f, engine);
    if (p_a >= p_b) ++hits;
  }
  const auto n = static_cast<double>(samples);
  const double smoothed = (static_cast<double>(hits) + 0.5) / (n + 1.0);
  OracleReport report;
  report.value = static_cast<double>(hits) / n;
  report.method = OracleMethod::kMonteCarlo;
  report.error_estimate = 3.0 * std::sqrt(smoothed * (1.0 - smoothed) / n);
  report.seed = seed;
  report.samples = samples;
  return report;
}

OracleReport maximize_reversal_grid(const TrialTable& table, int lattice) {
  if (lattice < 1 || lattice > kMaxGridLattice) {
    throw Error(ErrorCode::kDomain, "grid lattice must be in [1, 41]");
  }
  OracleReport report;
  report.method = OracleMethod::kGrid;
  report.error_estimate = 1e-9;
  if (!reversible(table)) return report;
  double best = 0.0;
  std::optional<decompose::SplitFractions> where;
  const double spacing = 1.0 / (lattice + 1);
  for (int i = 1; i <= lattice; ++i) {
    for (int j = 1; j <= lattice; ++j) {
      const double alpha = i * spacing;
      const double beta = j * spacing;
      const auto c = decompose::max_verified_cprime(table, alpha, beta);
      if (c && *c > best) {
        best = *c;
        where = decompose::SplitFractions{alpha, beta};
      }
    }
  }
  report.value = best;
  report.split = where;
  return report;
}

}  // namespace simpson::oracle
