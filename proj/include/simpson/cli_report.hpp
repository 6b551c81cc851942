#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "simpson/core_model.hpp"
#include "simpson/error.hpp"

namespace simpson::cli {

inline constexpr std::string_view kSchemaVersion = "1.0.0";

enum class InputFormat { kCsv, kJson, kAuto };

/// Parses one table (`label,successes,trials`) or two (`part,label,...`).
/// Rows must list A before B within each part, parts in order 1 then 2.
/// Syntax problems throw Error{kParse} with line and column; count problems
/// keep their core_model code with the offending line in the message.
std::vector<TrialTable> parse_tables(std::string_view source, InputFormat format);

std::string emit_csv(std::span<const TrialTable> tables);
nlohmann::json tables_to_json(std::span<const TrialTable> tables);

enum class CompareMethod { kExact, kNormal, kBoth };

struct CompareOptions {
  CompareMethod method = CompareMethod::kBoth;
  bool verify = false;
  std::uint64_t seed = 1;
  std::uint64_t samples = 1'000'000;
  bool force_exact = false;
};

struct NeutralizeOptions {
  std::optional<double> lambda;
  std::optional<double> mu;
};

struct ReverseOptions {
  bool maximize = false;
  double alpha = 0.0;
  double beta = 0.0;
  double c_prime = 0.0;
  bool integer_output = false;
};

nlohmann::json run_compare(const TrialTable& table, const CompareOptions& options);
nlohmann::json run_merge_check(const TrialTable& t1, const TrialTable& t2,
                               const CompareOptions& options);
/// Without lambda/mu the placement is suggested from the rates.
nlohmann::json run_neutralize(const TrialTable& table, const NeutralizeOptions& options);
nlohmann::json run_reverse(const TrialTable& table, const ReverseOptions& options);

/// 1 for infeasible or degenerate analyses, 2 for input errors.
int exit_code_for(ErrorCode code);

nlohmann::json error_report(std::string_view command, const Error& error);

/// Aligned `path  value` lines, one per leaf.
std::string render_text(const nlohmann::json& report);

/// Full command-line entry point; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::istream& in, std::ostream& out,
            std::ostream& err);

}  // namespace simpson::cli
