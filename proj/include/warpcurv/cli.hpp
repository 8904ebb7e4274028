#pragma once

// Commands behind the warpcurv executable. Each returns the JSON report, the
// human-readable text and the process exit code.

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "warpcurv/manifest.hpp"

namespace warpcurv {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "warpcurv-report";
inline constexpr int kReportVersion = 1;

enum ExitCode { kExitPass = 0, kExitVerdictFailure = 1, kExitInputError = 2 };

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<int> points;
  ParameterOverrides parameters;
  std::optional<std::string> l1;
  std::optional<std::string> l2;
  /// Treat a vanishing L2 as an input error instead of skipping the dichotomy.
  bool require_dichotomy = false;
};

struct CommandResult {
  Json report;
  std::string text;
  int exit_code = kExitPass;
};

CommandResult cmd_curvature(const Manifest& m, const RunOptions& opt = {});
CommandResult cmd_classify(const Manifest& m, const RunOptions& opt = {});
CommandResult cmd_warped_verify(const Manifest& m, const RunOptions& opt = {});
/// Runs the bundled fixture suite found in `fixtures`.
CommandResult cmd_selftest(const std::filesystem::path& fixtures, const RunOptions& opt = {});

std::string dump_report(const Json& report);
Json parse_report(const std::string& text);

/// Maps exceptions thrown by input handling to kExitInputError messages;
/// anything else is rethrown.
std::optional<std::string> input_error_message(const std::exception& e);

}  // namespace warpcurv
