#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "simpson/cli_report.hpp"
#include "test_support.hpp"

namespace simpson::cli {
namespace {

using nlohmann::json;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<const char*> args, const std::string& input) {
  args.insert(args.begin(), "simpson");
  std::istringstream in(input);
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(static_cast<int>(args.size()), args.data(), in, out, err);
  return {code, out.str(), err.str()};
}

const std::string kHospitalCsv = "label,successes,trials\nA,900,1000\nB,800,1000\n";
const std::string kTwoTrialCsv =
    "part,label,successes,trials\n1,A,60,80\n1,B,140,200\n2,A,60,200\n2,B,20,80\n";

TEST(ParseTables, SingleTableCsv) {
  const auto t = parse_tables("label,successes,trials\nA,900,1000\nB,800,1000", InputFormat::kCsv);
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t[0], make_table(900, 1000, 800, 1000));
}

TEST(ParseTables, TwoPartCsvWithCrlf) {
  std::string crlf;
  for (char c : kTwoTrialCsv) {
    if (c == '\n') crlf += '\r';
    crlf += c;
  }
  const auto t = parse_tables(crlf, InputFormat::kAuto);
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t[0], make_table(60, 80, 140, 200));
  EXPECT_EQ(t[1], make_table(60, 200, 20, 80));
}

TEST(ParseTables, CountErrorNamesTheRow) {
  try {
    parse_tables("label,successes,trials\nA,5,3", InputFormat::kCsv);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCountExceedsTrials);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(ParseTables, SyntaxErrorsCarryLineAndColumn) {
  const auto message = [](std::string_view src, InputFormat f) {
    try {
      parse_tables(src, f);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kParse);
      return std::string(e.what());
    }
    ADD_FAILURE();
    return std::string();
  };
  EXPECT_NE(message("label,successes,trials\nB,1,2\nA,1,2\n", InputFormat::kCsv).find("line 2"),
            std::string::npos);
  EXPECT_NE(message("label,successes,trials\nA,1x,2\nB,1,2\n", InputFormat::kCsv)
                .find("line 2, column 4"),
            std::string::npos);
  EXPECT_NE(message("label,successes,trials\nA,-1,2\nB,1,2\n", InputFormat::kCsv).find("line 2"),
            std::string::npos);
  EXPECT_NE(message("{\"a\": {\"successes\": 1,\n \"trials\" 2}}", InputFormat::kJson)
                .find("line 2"),
            std::string::npos);
  EXPECT_NE(message("{\"a\": {\"successes\": 1, \"trials\": 2}}", InputFormat::kJson).find("$"),
            std::string::npos);
  message("", InputFormat::kCsv);
  message("successes,label,trials\nA,1,2\nB,1,2\n", InputFormat::kCsv);
}

TEST(ParseTables, JsonForms) {
  const auto one = parse_tables(
      R"({"a": {"successes": 41, "trials": 100}, "b": {"successes": 29, "trials": 100}})",
      InputFormat::kJson);
  EXPECT_EQ(one.at(0), make_table(41, 100, 29, 100));
  const auto two = parse_tables(tables_to_json(std::vector{make_table(1, 2, 3, 4),
                                                           make_table(5, 6, 7, 8)})
                                    .dump(),
                                InputFormat::kAuto);
  ASSERT_EQ(two.size(), 2u);
  EXPECT_EQ(two[1], make_table(5, 6, 7, 8));
}

TEST(ParseTables, RoundTripPreservesCounts) {
  testing::TableGen gen(1201);
  for (int i = 0; i < 200; ++i) {
    std::vector<TrialTable> tables = {gen.table(1'000'000)};
    if (i % 2) tables.push_back(gen.table(kMaxCount));
    EXPECT_EQ(parse_tables(emit_csv(tables), InputFormat::kCsv), tables);
    EXPECT_EQ(parse_tables(tables_to_json(tables).dump(), InputFormat::kJson), tables);
  }
}

TEST(RunCompare, HospitalBothMethods) {
  const json r = run_compare(make_table(900, 1000, 800, 1000), {});
  EXPECT_NEAR(r["results"]["normal"]["z"].get<double>(), 6.3246, 1e-4);
  const double exact = r["results"]["exact"]["prob_superiority"].get<double>();
  EXPECT_GT(exact, 1.0 - 1e-8);
  EXPECT_LT(exact, 1.0);
  EXPECT_EQ(r["schema_version"], std::string(kSchemaVersion));
  EXPECT_TRUE(r["warnings"].empty());
}

TEST(RunCompare, SymmetricExact) {
  CompareOptions o;
  o.method = CompareMethod::kExact;
  const json r = run_compare(make_table(50, 100, 50, 100), o);
  EXPECT_NEAR(r["results"]["exact"]["prob_superiority"].get<double>(), 0.5, 1e-14);
  EXPECT_FALSE(r["results"].contains("normal"));
}

TEST(RunCompare, MethodsAgreeOnModerateTable) {
  const json r = run_compare(make_table(60, 100, 50, 100), {});
  const double e = r["results"]["exact"]["prob_superiority"].get<double>();
  const double n = r["results"]["normal"]["prob_superiority"].get<double>();
  EXPECT_LT(std::abs(e - n), 0.02);
}

TEST(RunCompare, DegenerateArmSkipsNormalWithWarning) {
  const json r = run_compare(make_table(10, 10, 3, 10), {});
  EXPECT_TRUE(r["results"].contains("exact"));
  EXPECT_FALSE(r["results"].contains("normal"));
  EXPECT_EQ(r["warnings"].size(), 1u);
}

TEST(RunCompare, VerifyAddsOracles) {
  CompareOptions o;
  o.verify = true;
  o.samples = 20000;
  const json r = run_compare(make_table(6, 10, 3, 10), o);
  ASSERT_EQ(r["results"]["oracles"].size(), 3u);
  const double exact = r["results"]["exact"]["prob_superiority"].get<double>();
  EXPECT_NEAR(r["results"]["oracles"][0]["value"].get<double>(), exact, 1e-12);
}

TEST(RunReverse, FixedNeutralizingPlan) {
  ReverseOptions o;
  o.alpha = 0.9346154;
  o.beta = 0.7384615;
  o.c_prime = 0.0;
  const json r = run_reverse(make_table(900, 1000, 800, 1000), o);
  EXPECT_NEAR(r["results"]["plan"]["k1"].get<double>(), 0.933333, 1e-6);
  EXPECT_NEAR(r["results"]["plan"]["k2"].get<double>(), 0.423529, 1e-6);
  EXPECT_EQ(r["results"]["requested_c_prime"].get<double>(), 0.0);
  EXPECT_EQ(r["results"]["ceilings"]["printed"]["note"], "reference-only; see docs");
}

TEST(RunReverse, SwapsArmsWhenBLeads) {
  ReverseOptions o;
  o.maximize = true;
  o.integer_output = true;
  const TrialTable t = make_table(800, 1000, 900, 1000);
  const json r = run_reverse(t, o);
  EXPECT_TRUE(r["results"]["arms_swapped"].get<bool>());
  EXPECT_EQ(r["warnings"].size(), 1u);
  const auto& parts = r["results"]["integer"]["parts"];
  EXPECT_EQ(parts[0]["a"]["successes"].get<Count>() + parts[1]["a"]["successes"].get<Count>(),
            800u);
}

TEST(RunCli, TwoTrialMergeCheck) {
  const CliRun r = run({"merge-check"}, kTwoTrialCsv);
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["results"]["parts"][0]["direction"], "A_AHEAD");
  EXPECT_EQ(j["results"]["parts"][1]["direction"], "A_AHEAD");
  EXPECT_EQ(j["results"]["merged"]["direction"], "B_AHEAD");
  EXPECT_TRUE(j["results"]["reversal"].get<bool>());
}

TEST(RunCli, BerkeleyNeutralize) {
  const CliRun r = run({"neutralize", "--lambda", "0.2", "--mu", "0.5"},
                       "label,successes,trials\nA,41,100\nB,29,100\n");
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  const auto& parts = j["results"]["integer"]["parts"];
  EXPECT_EQ(parse_tables(parts[0].dump(), InputFormat::kJson)[0], make_table(6, 30, 14, 70));
  EXPECT_EQ(parse_tables(parts[1].dump(), InputFormat::kJson)[0], make_table(35, 70, 15, 30));
}

TEST(RunCli, ExitCodes) {
  EXPECT_EQ(run({"maximize"}, "label,successes,trials\nA,5,10\nB,5,10\n").code, 1);
  const CliRun bad = run({"compare"}, "label,successes,trials\nA,5,3\nB,1,2\n");
  EXPECT_EQ(bad.code, 2);
  EXPECT_EQ(json::parse(bad.out)["error"]["code"], "COUNT_EXCEEDS_TRIALS");
  EXPECT_FALSE(bad.err.empty());
  EXPECT_EQ(run({"compare", "--method", "bogus"}, kHospitalCsv).code, 2);
  EXPECT_EQ(run({"neutralize"}, kHospitalCsv).code, 2);
  EXPECT_EQ(run({"merge-check"}, kHospitalCsv).code, 2);
  EXPECT_EQ(run({"neutralize", "--lambda", "0.85", "--mu", "0.95"}, kHospitalCsv).code, 2);
  EXPECT_EQ(run({"reverse", "--alpha", "0.62", "--beta", "0.6", "--cprime", "0"}, kHospitalCsv)
                .code,
            1);
  EXPECT_EQ(run({"compare", "/nonexistent/file.csv"}, "").code, 2);
}

TEST(RunCli, TextFormatAndGlobalFlagsAfterSubcommand) {
  const CliRun r = run({"compare", "--format", "text", "--method", "normal"}, kHospitalCsv);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("results.normal.z"), std::string::npos);
  EXPECT_EQ(r.out.find("results.exact"), std::string::npos);
}

TEST(RunCli, ReverseReportsRealizedNextToRequested) {
  const CliRun r = run({"reverse", "--alpha", "0.9", "--beta", "0.6", "--cprime", "0.03",
                        "--integer"},
                       kHospitalCsv);
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["results"]["requested_c_prime"].get<double>(), 0.03);
  EXPECT_GE(j["results"]["achieved_c_prime"].get<double>(), 0.03 - 1e-9);
  EXPECT_TRUE(j["results"]["verified"].get<bool>());
  EXPECT_TRUE(j["results"]["integer"]["reversal_holds"].get<bool>());
}

TEST(RenderText, AlignsLeaves) {
  const std::string text = render_text(json{{"a", 1}, {"bb", {{"c", "x"}}}});
  EXPECT_EQ(text, "a     1\nbb.c  x\n");
}

}  // namespace
}  // namespace simpson::cli
