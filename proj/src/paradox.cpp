#include "simpson/paradox.hpp"

#include <cmath>
#include <optional>

#include "simpson/error.hpp"

namespace simpson::paradox {
namespace {

constexpr double kIntegerSlack = 1e-9;

std::optional<Count> as_whole(double x) {
  const double r = std::round(x);
  if (r < 0.0 || std::fabs(x - r) > kIntegerSlack) return std::nullopt;
  return static_cast<Count>(r);
}

void check_prototype_rates(double a, double b) {
  if (!(a >= 0.0) || !(b < 0.5) || !(a <= b)) {
    throw Error(ErrorCode::kDomain, "prototype needs 0 <= a <= b < 1/2");
  }
}

}  // namespace

SimpsonReport simpson_check(const TrialTable& t1, const TrialTable& t2) {
  SimpsonReport report;
  const TrialTable merged = merge(t1, t2);
  report.part_directions = {direction(t1), direction(t2)};
  report.merged_direction = direction(merged);
  const Direction first = report.part_directions[0];
  report.reversal = first != Direction::kTie && first == report.part_directions[1] &&
                    report.merged_direction != first;
  // Degenerate parts fall back to the exact sum regardless of size.
  report.part_confidences = {asymptotics::best_comparison(t1, /*force=*/true),
                             asymptotics::best_comparison(t2, /*force=*/true)};
  report.merged_confidence = asymptotics::best_comparison(merged, /*force=*/true);
  return report;
}

double prototype_reversal_threshold(double a, double b) {
  check_prototype_rates(a, b);
  return (1.0 - 2.0 * b) / (1.0 - 2.0 * a);
}

bool prototype_reversal_predicted(double a, double b, Count n1, Count n2) {
  const double threshold = prototype_reversal_threshold(a, b);
  const auto a_n1 = as_whole(a * static_cast<double>(n1));
  const auto b_n2 = as_whole(b * static_cast<double>(n2));
  if (a_n1 && b_n2) {
    // n1 (1 - 2a) < n2 (1 - 2b) with integer products.
    using Wide = __int128;
    return Wide(n1) - 2 * Wide(*a_n1) < Wide(n2) - 2 * Wide(*b_n2);
  }
  return static_cast<double>(n1) < threshold * static_cast<double>(n2);
}

PrototypeTrials build_prototype(double a, double b, Count n1, Count n2) {
  check_prototype_rates(a, b);
  const auto a_n1 = as_whole(a * static_cast<double>(n1));
  const auto b_n2 = as_whole(b * static_cast<double>(n2));
  if (!a_n1 || !b_n2) {
    throw Error(ErrorCode::kDomain, "a*n1 and b*n2 must be whole numbers");
  }
  return PrototypeTrials{
      make_table(n1 - *a_n1, n1, n2 - *b_n2, n2),
      make_table(*b_n2, n2, *a_n1, n1),
  };
}

}  // namespace simpson::paradox
