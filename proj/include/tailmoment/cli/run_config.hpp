#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "tailmoment/envelope.hpp"
#include "tailmoment/grid.hpp"
#include "tailmoment/tail_to_moment.hpp"

namespace tailmoment::cli {

enum class Command { bound_moment, bound_tail, gls_norm, tauberian, validate };
enum class OutputFormat { csv, json };

std::string_view to_string(Command command);
std::string_view to_string(OutputFormat format);
Command parse_command(std::string_view text);
OutputFormat parse_format(std::string_view text);

/// Everything a command needs. Unset optionals fall back to per-command defaults.
struct RunConfig {
    Command command = Command::validate;
    std::optional<TailEnvelope> envelope;
    std::optional<GridSpec> t_grid;
    std::optional<GridSpec> p_grid;
    double rel_tol = kDefaultRelTol;
    std::uint64_t seed = 1;
    OutputFormat format = OutputFormat::csv;
    std::string out;  // empty: standard output
    bool linear = false;
    std::optional<std::string> oracle;
    std::optional<double> beta;
    double p_max = 200.0;
    std::optional<double> calib;
    std::size_t samples = 1'000'000;

    /// Throws ConfigError on anything the command would reject later.
    void validate() const;
};

/// "min:max:count" or "min:max:count:geom" ("lin" is accepted as the explicit default).
GridSpec parse_grid(std::string_view text);
std::string format_grid(const GridSpec& grid);

/// {theta, gamma, C, t0, q: {c, a, b, d}}; every field optional, unknown fields rejected.
TailEnvelope envelope_from_json(const nlohmann::json& doc);
nlohmann::ordered_json envelope_to_json(const TailEnvelope& env);
/// Inline JSON when the text starts with '{', otherwise a path to a JSON file.
TailEnvelope parse_envelope_spec(std::string_view text);

/// Config-file keys are the long flag names ("rel-tol"; "rel_tol" also works).
/// Values from the file replace flag values; one warning per key that was also
/// given as a flag. flags_given holds long flag names.
std::vector<std::string> apply_config_json(RunConfig& config, const nlohmann::json& doc,
                                           const std::set<std::string>& flags_given);
std::vector<std::string> apply_config_file(RunConfig& config, const std::filesystem::path& path,
                                           const std::set<std::string>& flags_given);

}  // namespace tailmoment::cli
