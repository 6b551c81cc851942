#include <gtest/gtest.h>

#include "simpson/core_model.hpp"
#include "simpson/error.hpp"
#include "test_support.hpp"

namespace simpson {
namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no Error thrown";
  return ErrorCode::kDomain;
}

TEST(MakeTable, HospitalCounts) {
  const TrialTable t = make_table(900, 1000, 800, 1000);
  const RatePair r = rates(t);
  EXPECT_DOUBLE_EQ(r.p_a, 0.9);
  EXPECT_DOUBLE_EQ(r.p_b, 0.8);
  EXPECT_EQ(t.failures_a(), 100u);
  EXPECT_EQ(t.total_trials(), 2000u);
}

TEST(MakeTable, BoundaryCountsAreValid) {
  const RatePair r = rates(make_table(0, 1, 0, 1));
  EXPECT_EQ(r.p_a, 0.0);
  EXPECT_EQ(r.p_b, 0.0);
}

TEST(MakeTable, RejectsBadCounts) {
  EXPECT_EQ(code_of([] { make_table(5, 3, 1, 1); }), ErrorCode::kCountExceedsTrials);
  EXPECT_EQ(code_of([] { make_table(0, 0, 1, 1); }), ErrorCode::kEmptyArm);
  EXPECT_EQ(code_of([] { make_table(1, kMaxCount + 1, 1, 1); }), ErrorCode::kCountTooLarge);
  EXPECT_NO_THROW(make_table(1, kMaxCount, 1, 1));
}

TEST(MakeFractional, RejectsNegativeAndOverfullCells) {
  EXPECT_EQ(code_of([] { make_fractional(-0.5, 2.0, 1.0, 1.0); }), ErrorCode::kDomain);
  EXPECT_EQ(code_of([] { make_fractional(3.0, 2.0, 1.0, 1.0); }), ErrorCode::kDomain);
  EXPECT_EQ(code_of([] { make_fractional(1.0, 0.0, 1.0, 1.0); }), ErrorCode::kDomain);
  EXPECT_DOUBLE_EQ(make_fractional(1.5, 3.0, 0.0, 2.0).rate_a(), 0.5);
}

TEST(Rates, BerkeleyAggregate) {
  const RatePair r = rates(make_table(41, 100, 29, 100));
  EXPECT_DOUBLE_EQ(r.p_a, 0.41);
  EXPECT_DOUBLE_EQ(r.p_b, 0.29);
  EXPECT_DOUBLE_EQ(r.gamma, 0.5);
}

TEST(Rates, ExtremeRates) {
  const RatePair r = rates(make_table(0, 10, 10, 10));
  EXPECT_EQ(r.p_a, 0.0);
  EXPECT_EQ(r.p_b, 1.0);
}

TEST(Rates, GammaIsArmAShare) {
  EXPECT_DOUBLE_EQ(rates(make_table(60, 80, 140, 200)).gamma, 80.0 / 280.0);
}

TEST(Merge, TwoTrialParts) {
  const TrialTable merged = merge(make_table(60, 80, 140, 200), make_table(60, 200, 20, 80));
  EXPECT_EQ(merged, make_table(120, 280, 160, 280));
}

TEST(Merge, AddsCellwiseAndCommutes) {
  testing::TableGen gen(7);
  for (int i = 0; i < 100; ++i) {
    const TrialTable a = gen.table(50);
    const TrialTable b = gen.table(50);
    EXPECT_EQ(merge(a, b), merge(b, a));
    const TrialTable plus = merge(a, make_table(0, 1, 0, 1));
    EXPECT_EQ(plus.trials_a, a.trials_a + 1);
    EXPECT_EQ(plus.successes_a, a.successes_a);
  }
}

TEST(Merge, FractionalMatchesIntegral) {
  const TrialTable a = make_table(3, 7, 2, 9);
  const TrialTable b = make_table(5, 6, 1, 4);
  const FractionalTable m = merge(to_fractional(a), to_fractional(b));
  const TrialTable expect = merge(a, b);
  EXPECT_EQ(m.successes_a, 8.0);
  EXPECT_EQ(m.trials_b, static_cast<double>(expect.trials_b));
}

TEST(Direction, TwoTrialCounts) {
  EXPECT_EQ(direction(make_table(60, 80, 140, 200)), Direction::kAAhead);
  EXPECT_EQ(direction(make_table(120, 280, 160, 280)), Direction::kBAhead);
  EXPECT_EQ(direction(make_table(5, 10, 10, 20)), Direction::kTie);
}

TEST(Direction, ExactForHugeCounts) {
  // Rates differ by about 1e-31, far below double resolution.
  const Count n = kMaxCount;
  EXPECT_EQ(direction(make_table(n - 1, n, n - 2, n - 1)), Direction::kAAhead);
  EXPECT_EQ(direction(make_table(n - 2, n - 1, n - 1, n)), Direction::kBAhead);
}

TEST(Direction, SwapReverses) {
  testing::TableGen gen(11);
  for (int i = 0; i < 200; ++i) {
    const TrialTable t = gen.table(30);
    const Direction d = direction(t);
    const Direction s = direction(swap_arms(t));
    if (d == Direction::kTie) {
      EXPECT_EQ(s, Direction::kTie);
    } else {
      EXPECT_NE(d, s);
    }
    EXPECT_EQ(swap_arms(swap_arms(t)), t);
  }
}

TEST(Direction, Names) {
  EXPECT_EQ(to_string(Direction::kAAhead), "A_AHEAD");
  EXPECT_EQ(to_string(Direction::kBAhead), "B_AHEAD");
  EXPECT_EQ(to_string(Direction::kTie), "TIE");
}

TEST(Error, MessageCarriesCode) {
  const Error e(ErrorCode::kParse, "bad");
  EXPECT_STREQ(e.what(), "PARSE: bad");
  EXPECT_EQ(to_string(ErrorCode::kCountExceedsTrials), "COUNT_EXCEEDS_TRIALS");
}

}  // namespace
}  // namespace simpson
