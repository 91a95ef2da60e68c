#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "owshift/radii.hpp"
#include "owshift/spec_io.hpp"

namespace ows {

inline constexpr const char* kToolVersion = "0.1.0";

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int parse_error = 1;
inline constexpr int singular_weight = 2;
inline constexpr int inconsistent = 3;
inline constexpr int zero_vector = 4;
inline constexpr int refuted = 5;
}  // namespace exit_code

struct RunConfig {
  AnalysisConfig analysis;
  std::string format = "json";  // json | csv
  std::optional<std::string> out;
  int grid = 0;  // radial points of the optional resolvent map in `local`
  std::optional<std::string> write_spec;
};

struct CommandResult {
  Json document;
  int exit_code = exit_code::ok;
  /// PASS/FAIL lines (examples only).
  std::vector<std::string> lines;
};

CommandResult cmd_report(const std::string& spec_file, const RunConfig& config);
CommandResult cmd_report(const WeightSpec& spec, const RunConfig& config, const std::string& spec_label);
CommandResult cmd_local(const std::string& spec_file, const std::string& vector_literal, const RunConfig& config);
CommandResult cmd_check(const std::string& spec_file, const std::string& which, const std::string& vector_literal,
                        const RunConfig& config);
CommandResult cmd_examples(const std::string& name, const RunConfig& config);

/// Document text in the configured format.
std::string render(const Json& document, const std::string& format);

/// Runs `command`, maps library errors to exit codes, writes the rendered
/// document to config.out or `out`, and diagnostics to `err`.
int run_command(const std::function<CommandResult()>& command, const RunConfig& config, std::ostream& out,
                std::ostream& err);

}  // namespace ows
