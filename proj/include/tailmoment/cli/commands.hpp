#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "tailmoment/cli/run_config.hpp"

namespace tailmoment::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

/// Rows in fixed column order plus a flat summary. Null cells mean "not applicable".
struct Table {
    std::vector<std::string> columns;
    std::vector<nlohmann::ordered_json> rows;
    /// Columns holding natural logs; --linear adds linear_<name> for each.
    std::vector<std::string> log_columns;
    nlohmann::ordered_json summary = nlohmann::ordered_json::object();
};

struct CommandResult {
    Table table;
    int exit_code = kExitOk;
    std::vector<std::string> messages;
};

CommandResult cmd_bound_moment(const RunConfig& config);
CommandResult cmd_bound_tail(const RunConfig& config);
CommandResult cmd_gls_norm(const RunConfig& config);
CommandResult cmd_tauberian(const RunConfig& config);
CommandResult cmd_validate(const RunConfig& config);
CommandResult run_command(const RunConfig& config);

/// CSV: header, rows, then "# key=value" footer lines. JSON: {columns, rows, summary}.
std::string render(const Table& table, OutputFormat format, bool linear);

/// Validates, runs and writes the report. Output goes to config.out through a
/// temporary file renamed on success, or to `out` when no path is set. Errors
/// and warnings go to `err`. Returns the process exit code.
int execute(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace tailmoment::cli
