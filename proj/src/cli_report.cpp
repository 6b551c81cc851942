#include "simpson/cli_report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "simpson/asymptotics.hpp"
#include "simpson/bayes_exact.hpp"
#include "simpson/decompose.hpp"
#include "simpson/oracle.hpp"
#include "simpson/paradox.hpp"

namespace simpson::cli {
namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Input parsing

[[noreturn]] void parse_error(std::size_t line, std::size_t column, const std::string& what) {
  throw Error(ErrorCode::kParse,
              "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what);
}

struct Field {
  std::string_view text;
  std::size_t column;  // 1-based
};

std::vector<Field> split_fields(std::string_view line) {
  std::vector<Field> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    const std::size_t end = comma == std::string_view::npos ? line.size() : comma;
    fields.push_back(Field{line.substr(start, end - start), start + 1});
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

Count parse_count(const Field& field, std::size_t line) {
  Count value = 0;
  const char* first = field.text.data();
  const char* last = first + field.text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (field.text.empty() || ec != std::errc() || ptr != last) {
    parse_error(line, field.column + static_cast<std::size_t>(ptr - first),
                "expected a non-negative integer, got '" + std::string(field.text) + "'");
  }
  return value;
}

struct Row {
  std::size_t line;
  Count successes;
  Count trials;
};

// Count checks per row, so the message can name the offending line.
void check_row(const Row& row) {
  if (row.trials > kMaxCount || row.successes > kMaxCount) {
    throw Error(ErrorCode::kCountTooLarge, "line " + std::to_string(row.line) + ": count above 2^53-1");
  }
  if (row.trials == 0) {
    throw Error(ErrorCode::kEmptyArm, "line " + std::to_string(row.line) + ": zero trials");
  }
  if (row.successes > row.trials) {
    throw Error(ErrorCode::kCountExceedsTrials,
                "line " + std::to_string(row.line) + ": " + std::to_string(row.successes) +
                    " successes > " + std::to_string(row.trials) + " trials");
  }
}

TrialTable table_from_rows(const Row& a, const Row& b) {
  return make_table(a.successes, a.trials, b.successes, b.trials);
}

std::vector<TrialTable> parse_csv(std::string_view source) {
  std::vector<std::pair<std::size_t, std::string_view>> lines;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= source.size()) {
    const std::size_t nl = source.find('\n', pos);
    std::string_view line = source.substr(pos, nl == std::string_view::npos ? source.npos : nl - pos);
    ++number;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.emplace_back(number, line);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  if (lines.empty()) parse_error(1, 1, "empty input");

  const auto [header_line, header] = lines.front();
  const bool two_part = header == "part,label,successes,trials";
  if (!two_part && header != "label,successes,trials") {
    parse_error(header_line, 1,
                "header must be 'label,successes,trials' or 'part,label,successes,trials'");
  }
  const std::size_t expected_rows = two_part ? 4 : 2;
  const std::size_t width = two_part ? 4 : 3;

  std::vector<Row> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto [line_no, line] = lines[i];
    if (i > expected_rows) parse_error(line_no, 1, "expected " + std::to_string(expected_rows) + " data rows");
    const auto fields = split_fields(line);
    if (fields.size() != width) {
      parse_error(line_no, 1, "expected " + std::to_string(width) + " fields");
    }
    std::size_t f = 0;
    const std::size_t slot = i - 1;  // 0-based data row
    if (two_part) {
      const std::string expected_part = slot < 2 ? "1" : "2";
      if (fields[f].text != expected_part) {
        parse_error(line_no, fields[f].column, "expected part " + expected_part);
      }
      ++f;
    }
    const std::string_view expected_label = slot % 2 == 0 ? "A" : "B";
    if (fields[f].text != expected_label) {
      parse_error(line_no, fields[f].column,
                  "expected label " + std::string(expected_label) + " (rows are A then B)");
    }
    ++f;
    const Row row{line_no, parse_count(fields[f], line_no), parse_count(fields[f + 1], line_no)};
    check_row(row);
    rows.push_back(row);
  }
  if (rows.size() != expected_rows) {
    parse_error(lines.back().first + 1, 1,
                "expected " + std::to_string(expected_rows) + " data rows");
  }
  std::vector<TrialTable> tables;
  for (std::size_t i = 0; i < rows.size(); i += 2) tables.push_back(table_from_rows(rows[i], rows[i + 1]));
  return tables;
}

std::pair<std::size_t, std::size_t> line_column_at(std::string_view source, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < std::min(byte, source.size()); ++i) {
    if (source[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

Count json_count(const json& arm, const char* key, const std::string& where) {
  if (!arm.is_object() || !arm.contains(key)) {
    throw Error(ErrorCode::kParse, where + ": missing \"" + key + "\"");
  }
  const json& v = arm.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    throw Error(ErrorCode::kParse, where + "." + key + ": expected a non-negative integer");
  }
  return v.get<Count>();
}

TrialTable json_table(const json& obj, const std::string& where) {
  if (!obj.is_object() || !obj.contains("a") || !obj.contains("b")) {
    throw Error(ErrorCode::kParse, where + ": expected an object with \"a\" and \"b\"");
  }
  const Row a{0, json_count(obj["a"], "successes", where + ".a"),
              json_count(obj["a"], "trials", where + ".a")};
  const Row b{0, json_count(obj["b"], "successes", where + ".b"),
              json_count(obj["b"], "trials", where + ".b")};
  try {
    return make_table(a.successes, a.trials, b.successes, b.trials);
  } catch (const Error& e) {
    throw Error(e.code(), where + ": " + e.what());
  }
}

std::vector<TrialTable> parse_json(std::string_view source) {
  json doc;
  try {
    doc = json::parse(source);
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_column_at(source, e.byte == 0 ? 0 : e.byte - 1);
    parse_error(line, column, "malformed JSON");
  }
  if (doc.is_object() && doc.contains("parts")) {
    const json& parts = doc["parts"];
    if (!parts.is_array() || parts.size() != 2) {
      throw Error(ErrorCode::kParse, "\"parts\" must be an array of two tables");
    }
    return {json_table(parts[0], "parts[0]"), json_table(parts[1], "parts[1]")};
  }
  return {json_table(doc, "$")};
}

// ---------------------------------------------------------------------------
// Report pieces

json table_json(const TrialTable& t) {
  return json{{"a", {{"successes", t.successes_a}, {"trials", t.trials_a}}},
              {"b", {{"successes", t.successes_b}, {"trials", t.trials_b}}}};
}

json fractional_json(const FractionalTable& t) {
  return json{{"a", {{"successes", t.successes_a}, {"trials", t.trials_a}, {"rate", t.rate_a()}}},
              {"b", {{"successes", t.successes_b}, {"trials", t.trials_b}, {"rate", t.rate_b()}}}};
}

json comparison_json(const asymptotics::ComparisonResult& r) {
  json out{{"method", asymptotics::to_string(r.method)},
           {"prob_superiority", r.prob_superiority}};
  if (r.stats) {
    out["c_value"] = r.stats->c_value;
    out["sigma"] = r.stats->sigma;
    out["z"] = r.stats->z;
  } else {
    out["c_value"] = nullptr;
    out["sigma"] = nullptr;
    out["z"] = nullptr;
  }
  return out;
}

json subtrial_json(const asymptotics::SubtrialConfidence& c) {
  return json{{"part", c.part_index}, {"c_prime", c.c_prime}, {"sigma", c.sigma}, {"z", c.z}};
}

json oracle_json(const oracle::OracleReport& r) {
  json out{{"method", oracle::to_string(r.method)},
           {"value", r.value},
           {"error_estimate", r.error_estimate}};
  if (r.seed) out["seed"] = *r.seed;
  if (r.samples) out["samples"] = *r.samples;
  if (r.exact) out["exact"] = *r.exact;
  return out;
}

json rates_json(const TrialTable& t) {
  const RatePair r = rates(t);
  return json{{"p_a", r.p_a}, {"p_b", r.p_b}, {"gamma", r.gamma}};
}

json base_report(std::string_view command, std::span<const TrialTable> tables) {
  return json{{"schema_version", kSchemaVersion},
              {"command", command},
              {"input", tables_to_json(tables)},
              {"results", json::object()},
              {"warnings", json::array()}};
}

std::string code_note(const Error& e) { return std::string(to_string(e.code())); }

json integer_split_json(const decompose::IntegerSplit& split, bool has_target) {
  json realized = json::array();
  for (const auto& r : split.realized) realized.push_back(r ? subtrial_json(*r) : json(nullptr));
  return json{{"parts", {table_json(split.parts[0]), table_json(split.parts[1])}},
              {"realized", realized},
              {"reversal_holds", split.reversal_holds},
              {"meets_target", has_target ? json(split.meets_target) : json(nullptr)}};
}

void render_leaves(const json& node, const std::string& path,
                   std::vector<std::pair<std::string, std::string>>& out) {
  if (node.is_object()) {
    for (const auto& [key, value] : node.items()) {
      render_leaves(value, path.empty() ? key : path + "." + key, out);
    }
  } else if (node.is_array()) {
    if (node.empty()) out.emplace_back(path, "[]");
    for (std::size_t i = 0; i < node.size(); ++i) {
      render_leaves(node[i], path + "[" + std::to_string(i) + "]", out);
    }
  } else if (node.is_string()) {
    out.emplace_back(path, node.get<std::string>());
  } else {
    out.emplace_back(path, node.dump());
  }
}

}  // namespace

std::vector<TrialTable> parse_tables(std::string_view source, InputFormat format) {
  if (format == InputFormat::kAuto) {
    const auto first = source.find_first_not_of(" \t\r\n");
    format = first != std::string_view::npos && (source[first] == '{' || source[first] == '[')
                 ? InputFormat::kJson
                 : InputFormat::kCsv;
  }
  return format == InputFormat::kJson ? parse_json(source) : parse_csv(source);
}

std::string emit_csv(std::span<const TrialTable> tables) {
  std::ostringstream out;
  const bool two_part = tables.size() == 2;
  out << (two_part ? "part,label,successes,trials\n" : "label,successes,trials\n");
  for (std::size_t i = 0; i < tables.size(); ++i) {
    const std::string prefix = two_part ? std::to_string(i + 1) + "," : "";
    out << prefix << "A," << tables[i].successes_a << ',' << tables[i].trials_a << '\n';
    out << prefix << "B," << tables[i].successes_b << ',' << tables[i].trials_b << '\n';
  }
  return out.str();
}

json tables_to_json(std::span<const TrialTable> tables) {
  if (tables.size() == 1) return table_json(tables[0]);
  json parts = json::array();
  for (const auto& t : tables) parts.push_back(table_json(t));
  return json{{"parts", parts}};
}

json run_compare(const TrialTable& table, const CompareOptions& options) {
  json report = base_report("compare", std::span(&table, 1));
  json& results = report["results"];
  json& warnings = report["warnings"];
  results["rates"] = rates_json(table);
  results["direction"] = to_string(direction(table));

  const bool want_exact = options.method != CompareMethod::kNormal;
  const bool want_normal = options.method != CompareMethod::kExact;
  if (want_exact) {
    try {
      results["exact"] = comparison_json(asymptotics::exact_comparison(table, options.force_exact));
    } catch (const Error& e) {
      if (options.method == CompareMethod::kExact) throw;
      warnings.push_back("exact method skipped: " + code_note(e) +
                         " (N above the exact-mode cap; pass --force-exact)");
    }
  }
  if (want_normal) {
    try {
      results["normal"] = comparison_json(asymptotics::prob_a_beats_b_normal(table));
    } catch (const Error& e) {
      if (options.method == CompareMethod::kNormal) throw;
      warnings.push_back("normal method skipped: " + code_note(e) +
                         " (a rate of 0 or 1 leaves no variance estimate)");
    }
  }
  const auto moments = bayes::posterior_diff_moments(table);
  results["posterior_moments"] = {{"mean_diff", moments.mean_diff},
                                  {"var_diff", moments.var_diff}};

  if (options.verify) {
    json oracles = json::array();
    if (table.total_trials() <= oracle::kRationalCap) {
      oracles.push_back(oracle_json(oracle::prob_a_beats_b_rational(table)));
    }
    if (table.total_trials() <= oracle::kQuadratureCap) {
      oracles.push_back(oracle_json(oracle::prob_a_beats_b_quadrature(table)));
    }
    oracles.push_back(oracle_json(
        oracle::prob_a_beats_b_montecarlo(table, options.samples, options.seed)));
    results["oracles"] = oracles;
  }
  return report;
}

json run_merge_check(const TrialTable& t1, const TrialTable& t2, const CompareOptions&) {
  const std::array<TrialTable, 2> parts = {t1, t2};
  json report = base_report("merge-check", parts);
  const auto check = paradox::simpson_check(t1, t2);
  const TrialTable merged = merge(t1, t2);
  json part_list = json::array();
  for (int i = 0; i < 2; ++i) {
    part_list.push_back({{"part", i + 1},
                         {"rates", rates_json(parts[i])},
                         {"direction", to_string(check.part_directions[i])},
                         {"comparison", comparison_json(check.part_confidences[i])}});
  }
  report["results"] = {
      {"parts", part_list},
      {"merged",
       {{"table", table_json(merged)},
        {"rates", rates_json(merged)},
        {"direction", to_string(check.merged_direction)},
        {"comparison", comparison_json(check.merged_confidence)}}},
      {"reversal", check.reversal},
  };
  if (check.part_directions[0] == Direction::kTie || check.part_directions[1] == Direction::kTie) {
    report["warnings"].push_back("a tied part supports no direction, so it cannot be reversed");
  }
  return report;
}

json run_neutralize(const TrialTable& table, const NeutralizeOptions& options) {
  json report = base_report("neutralize", std::span(&table, 1));
  decompose::AveragingRates placement;
  if (options.lambda && options.mu) {
    placement = {*options.lambda, *options.mu};
  } else {
    placement = decompose::suggest_lambda_mu(table);
  }
  const auto parts = decompose::neutralize(table, placement.lambda, placement.mu);
  const auto fractions = decompose::neutralizing_fractions(rates(table), placement.lambda,
                                                           placement.mu);
  const auto split = decompose::integerize(parts);
  json results{{"lambda", placement.lambda},
               {"mu", placement.mu},
               {"placement", options.lambda ? "explicit" : "suggested"},
               {"alpha", fractions.alpha},
               {"beta", fractions.beta},
               {"parts", {fractional_json(parts[0]), fractional_json(parts[1])}},
               {"integer", integer_split_json(split, false)}};
  report["results"] = results;
  return report;
}

json run_reverse(const TrialTable& input, const ReverseOptions& options) {
  json report = base_report("reverse", std::span(&input, 1));
  json& warnings = report["warnings"];

  // The solvers expect A to lead; exchange the arms and map back at the end.
  const bool swapped = direction(input) == Direction::kBAhead;
  const TrialTable table = swapped ? swap_arms(input) : input;
  if (swapped) {
    warnings.push_back(
        "B leads in the aggregate: arms exchanged internally, so alpha applies to arm B and "
        "each part's c_prime measures A over B");
  }

  const auto solution = options.maximize
                            ? decompose::maximize_reversal(table)
                            : decompose::solve_reversal(table, options.alpha, options.beta,
                                                        options.c_prime);
  const auto& plan = solution.plan;
  const RatePair r = rates(table);

  auto parts = solution.parts;
  if (swapped) {
    for (auto& p : parts) {
      std::swap(p.successes_a, p.successes_b);
      std::swap(p.trials_a, p.trials_b);
    }
  }
  json realized = json::array();
  double achieved = solution.realized[0].c_prime;
  for (const auto& c : solution.realized) {
    realized.push_back(subtrial_json(c));
    achieved = std::min(achieved, c.c_prime);
  }

  json results{
      {"mode", options.maximize ? "maximize" : "fixed"},
      {"arms_swapped", swapped},
      {"requested_c_prime", options.maximize ? json(nullptr) : json(options.c_prime)},
      {"plan",
       {{"alpha", plan.alpha},
        {"beta", plan.beta},
        {"target_c_prime", plan.c_prime},
        {"k1", plan.k1},
        {"k2", plan.k2},
        {"sigma_1", plan.sigma_1},
        {"sigma_2", plan.sigma_2},
        {"sigma_alpha", plan.sigma_alpha},
        {"sigma_beta", plan.sigma_beta},
        {"p_a1", plan.p_a1},
        {"p_a2", plan.p_a2},
        {"p_b1", plan.p_b1},
        {"p_b2", plan.p_b2},
        {"iterations", plan.iterations},
        {"damped", plan.damped}}},
      {"parts", {fractional_json(parts[0]), fractional_json(parts[1])}},
      {"realized", realized},
      {"achieved_c_prime", achieved},
      {"verified", solution.verified},
      {"ceilings",
       {{"exact", decompose::cprime_ceiling_exact(r, plan.alpha, plan.beta, plan.sigma_alpha,
                                                  plan.sigma_beta)},
        {"sufficient", decompose::cprime_ceiling_sufficient(r, plan.alpha, plan.beta)},
        {"printed",
         {{"value", decompose::cprime_ceiling_printed(r)},
          {"note", "reference-only; see docs"}}}}},
  };
  if (!solution.verified) {
    warnings.push_back("realized confidences fall short of the target; plan not verified");
  }
  if (options.integer_output) {
    // Rounded in the solver's orientation, then mapped back.
    auto split = decompose::integerize(solution.parts, plan.c_prime);
    if (swapped) {
      for (auto& t : split.parts) t = swap_arms(t);
    }
    results["integer"] = integer_split_json(split, true);
    if (!split.meets_target) {
      warnings.push_back("rounding to whole counts moved a realized c_prime below the target");
    }
  }
  report["results"] = results;
  return report;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInfeasible:
    case ErrorCode::kDegenerateRate:
    case ErrorCode::kTie:
    case ErrorCode::kNoConvergence:
    case ErrorCode::kDegenerate:
    case ErrorCode::kTooLarge:
      return 1;
    case ErrorCode::kCountExceedsTrials:
    case ErrorCode::kEmptyArm:
    case ErrorCode::kCountTooLarge:
    case ErrorCode::kDomain:
    case ErrorCode::kPlacement:
    case ErrorCode::kParse:
      return 2;
  }
  return 2;
}

json error_report(std::string_view command, const Error& error) {
  return json{{"schema_version", kSchemaVersion},
              {"command", command},
              {"error", {{"code", to_string(error.code())}, {"message", error.what()}}},
              {"exit_code", exit_code_for(error.code())}};
}

std::string render_text(const json& report) {
  std::vector<std::pair<std::string, std::string>> leaves;
  render_leaves(report, "", leaves);
  std::size_t width = 0;
  for (const auto& [path, _] : leaves) width = std::max(width, path.size());
  std::ostringstream out;
  for (const auto& [path, value] : leaves) {
    out << path << std::string(width - path.size() + 2, ' ') << value << '\n';
  }
  return out.str();
}

int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Two-arm binomial comparisons, Simpson reversals and inverse-Simpson splits",
               "simpson"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string method = "both";
  std::string format = "json";
  std::string input_format = "auto";
  std::string input_path = "-";
  CompareOptions compare;
  app.add_option("--method", method, "exact, normal or both")
      ->check(CLI::IsMember({"exact", "normal", "both"}));
  app.add_flag("--verify", compare.verify, "add independent oracle confirmations");
  app.add_option("--seed", compare.seed, "Monte Carlo seed");
  app.add_option("--samples", compare.samples, "Monte Carlo sample count")
      ->check(CLI::Range(oracle::kMinMonteCarloSamples, std::uint64_t{1'000'000'000}));
  app.add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--input-format", input_format, "csv, json or auto")
      ->check(CLI::IsMember({"csv", "json", "auto"}));
  app.add_flag("--force-exact", compare.force_exact, "lift the exact-mode size cap");

  auto* cmd_compare = app.add_subcommand("compare", "probability of superiority and confidence");
  auto* cmd_merge = app.add_subcommand("merge-check", "Simpson reversal under merging");
  auto* cmd_neutralize = app.add_subcommand("neutralize", "split into two rate-neutral parts");
  auto* cmd_reverse = app.add_subcommand("reverse", "split into two parts that reverse A vs B");
  auto* cmd_maximize = app.add_subcommand("maximize", "same as reverse --maximize");
  for (auto* sub : {cmd_compare, cmd_merge, cmd_neutralize, cmd_reverse, cmd_maximize}) {
    sub->add_option("input", input_path, "CSV or JSON table file ('-' for stdin)");
  }

  NeutralizeOptions neutral;
  double lambda = 0.0;
  double mu = 0.0;
  auto* opt_lambda = cmd_neutralize->add_option("--lambda", lambda, "common rate of part 1");
  auto* opt_mu = cmd_neutralize->add_option("--mu", mu, "common rate of part 2");
  auto* opt_auto = cmd_neutralize->add_flag("--auto", "suggest lambda and mu from the rates");
  opt_lambda->needs(opt_mu);
  opt_mu->needs(opt_lambda);
  opt_auto->excludes(opt_lambda)->excludes(opt_mu);

  ReverseOptions reverse;
  auto* opt_alpha = cmd_reverse->add_option("--alpha", reverse.alpha, "A-arm share of part 1");
  auto* opt_beta = cmd_reverse->add_option("--beta", reverse.beta, "B-arm share of part 1");
  auto* opt_cprime = cmd_reverse->add_option("--cprime", reverse.c_prime, "target common c'");
  auto* opt_max = cmd_reverse->add_flag("--maximize", reverse.maximize, "search for the best split");
  cmd_reverse->add_flag("--integer", reverse.integer_output, "also round parts to whole counts");
  opt_alpha->needs(opt_beta)->needs(opt_cprime);
  cmd_maximize->add_flag("--integer", reverse.integer_output, "also round parts to whole counts");
  opt_max->excludes(opt_alpha)->excludes(opt_beta)->excludes(opt_cprime);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  const CLI::App* active = app.get_subcommands().front();
  const std::string command = active->get_name();
  const auto emit = [&](const json& report) {
    if (format == "text") {
      out << render_text(report);
    } else {
      out << report.dump(2) << '\n';
    }
  };

  if (command == "maximize") reverse.maximize = true;

  try {
    if (command == "neutralize" && opt_lambda->count() == 0 && opt_auto->count() == 0) {
      throw Error(ErrorCode::kDomain, "neutralize needs --lambda and --mu, or --auto");
    }
    if (command == "reverse" && !reverse.maximize && opt_alpha->count() == 0) {
      throw Error(ErrorCode::kDomain, "reverse needs --alpha --beta --cprime, or --maximize");
    }

    std::string source;
    if (input_path == "-") {
      source.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    } else {
      std::ifstream file(input_path, std::ios::binary);
      if (!file) throw Error(ErrorCode::kParse, "cannot open '" + input_path + "'");
      source.assign(std::istreambuf_iterator<char>(file), std::istreambuf_iterator<char>());
    }
    const InputFormat fmt = input_format == "csv"    ? InputFormat::kCsv
                            : input_format == "json" ? InputFormat::kJson
                                                     : InputFormat::kAuto;
    const auto tables = parse_tables(source, fmt);

    compare.method = method == "exact"    ? CompareMethod::kExact
                     : method == "normal" ? CompareMethod::kNormal
                                          : CompareMethod::kBoth;
    if (command == "merge-check") {
      if (tables.size() != 2) throw Error(ErrorCode::kParse, "merge-check needs a two-part input");
      emit(run_merge_check(tables[0], tables[1], compare));
      return 0;
    }
    if (tables.size() != 1) {
      throw Error(ErrorCode::kParse, command + " needs a single-table input");
    }
    if (command == "compare") {
      emit(run_compare(tables[0], compare));
    } else if (command == "neutralize") {
      if (opt_lambda->count() > 0) {
        neutral.lambda = lambda;
        neutral.mu = mu;
      }
      emit(run_neutralize(tables[0], neutral));
    } else {
      emit(run_reverse(tables[0], reverse));
    }
    return 0;
  } catch (const Error& e) {
    err << "simpson " << command << ": " << e.what() << '\n';
    emit(error_report(command, e));
    return exit_code_for(e.code());
  }
}

}  // namespace simpson::cli
