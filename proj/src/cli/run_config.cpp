#include "tailmoment/cli/run_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "tailmoment/errors.hpp"
#include "tailmoment/oracle.hpp"

namespace tailmoment::cli {

namespace {

using nlohmann::json;

double parse_number(std::string_view text, std::string_view what) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw ConfigError(std::string(what) + ": '" + std::string(text) + "' is not a number");
    }
    return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(sep, start);
        parts.push_back(text.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

double json_number(const json& v, std::string_view key) {
    if (!v.is_number()) throw ConfigError(std::string(key) + ": expected a number");
    return v.get<double>();
}

GridSpec grid_from_json(const json& v, std::string_view key) {
    if (v.is_string()) return parse_grid(v.get<std::string>());
    if (!v.is_object()) throw ConfigError(std::string(key) + ": expected \"min:max:count[:geom]\" or an object");
    GridSpec grid;
    for (const auto& [k, item] : v.items()) {
        if (k == "min") {
            grid.min = json_number(item, key);
        } else if (k == "max") {
            grid.max = json_number(item, key);
        } else if (k == "count") {
            if (!item.is_number_integer()) throw ConfigError(std::string(key) + ".count: expected an integer");
            grid.count = item.get<Eigen::Index>();
        } else if (k == "geom") {
            if (!item.is_boolean()) throw ConfigError(std::string(key) + ".geom: expected true or false");
            grid.geometric = item.get<bool>();
        } else {
            throw ConfigError(std::string(key) + ": unknown field '" + k + "'");
        }
    }
    return grid;
}

void check_grid(const GridSpec& grid, std::string_view name, bool positive) {
    const std::string what(name);
    if (!std::isfinite(grid.min) || !std::isfinite(grid.max) || grid.max < grid.min) {
        throw ConfigError(what + ": need finite min <= max");
    }
    if (grid.count < 1) throw ConfigError(what + ": count must be at least 1");
    if (grid.count == 1 && grid.min != grid.max) throw ConfigError(what + ": a single point needs min == max");
    if ((positive || grid.geometric) && !(grid.min > 0.0)) throw ConfigError(what + ": min must be positive");
}

std::string normalise_key(std::string key) {
    std::replace(key.begin(), key.end(), '_', '-');
    return key;
}

}  // namespace

std::string_view to_string(Command command) {
    switch (command) {
        case Command::bound_moment: return "bound-moment";
        case Command::bound_tail: return "bound-tail";
        case Command::gls_norm: return "gls-norm";
        case Command::tauberian: return "tauberian";
        case Command::validate: return "validate";
    }
    return "?";
}

std::string_view to_string(OutputFormat format) { return format == OutputFormat::csv ? "csv" : "json"; }

Command parse_command(std::string_view text) {
    for (Command c : {Command::bound_moment, Command::bound_tail, Command::gls_norm, Command::tauberian,
                      Command::validate}) {
        if (to_string(c) == text) return c;
    }
    throw ConfigError("unknown command '" + std::string(text) + "'");
}

OutputFormat parse_format(std::string_view text) {
    if (text == "csv") return OutputFormat::csv;
    if (text == "json") return OutputFormat::json;
    throw ConfigError("format: expected csv or json, got '" + std::string(text) + "'");
}

GridSpec parse_grid(std::string_view text) {
    const auto parts = split(text, ':');
    if (parts.size() < 3 || parts.size() > 4) {
        throw ConfigError("grid '" + std::string(text) + "': expected min:max:count[:geom]");
    }
    GridSpec grid;
    grid.min = parse_number(parts[0], "grid min");
    grid.max = parse_number(parts[1], "grid max");
    const double count = parse_number(parts[2], "grid count");
    if (count != std::floor(count) || count < 1 || count > 1e6) {
        throw ConfigError("grid count must be an integer in [1, 1e6]");
    }
    grid.count = static_cast<Eigen::Index>(count);
    if (parts.size() == 4) {
        if (parts[3] == "geom") {
            grid.geometric = true;
        } else if (parts[3] != "lin") {
            throw ConfigError("grid spacing must be 'geom' or 'lin', got '" + std::string(parts[3]) + "'");
        }
    }
    return grid;
}

std::string format_grid(const GridSpec& grid) {
    std::ostringstream out;
    out.precision(17);
    out << grid.min << ':' << grid.max << ':' << grid.count << (grid.geometric ? ":geom" : "");
    return out.str();
}

TailEnvelope envelope_from_json(const json& doc) {
    if (!doc.is_object()) throw ConfigError("envelope: expected a JSON object");
    TailEnvelope env;
    for (const auto& [key, value] : doc.items()) {
        if (key == "theta") {
            env.theta = json_number(value, "envelope.theta");
        } else if (key == "gamma") {
            env.gamma_exp = json_number(value, "envelope.gamma");
        } else if (key == "C") {
            env.rate = json_number(value, "envelope.C");
        } else if (key == "t0") {
            env.t0 = json_number(value, "envelope.t0");
        } else if (key == "q") {
            if (!value.is_object()) throw ConfigError("envelope.q: expected an object {c, a, b, d}");
            for (const auto& [qk, qv] : value.items()) {
                if (qk == "c") {
                    env.q.scale = json_number(qv, "envelope.q.c");
                } else if (qk == "a") {
                    env.q.log_power = json_number(qv, "envelope.q.a");
                } else if (qk == "b") {
                    env.q.exp_coeff = json_number(qv, "envelope.q.b");
                } else if (qk == "d") {
                    env.q.exp_power = json_number(qv, "envelope.q.d");
                } else {
                    throw ConfigError("envelope.q: unknown field '" + qk + "'");
                }
            }
        } else {
            throw ConfigError("envelope: unknown field '" + key + "'");
        }
    }
    try {
        env.validate();
    } catch (const DomainError& e) {
        throw ConfigError(std::string("envelope: ") + e.what());
    }
    return env;
}

nlohmann::ordered_json envelope_to_json(const TailEnvelope& env) {
    nlohmann::ordered_json q{{"c", env.q.scale}, {"a", env.q.log_power}, {"b", env.q.exp_coeff},
                             {"d", env.q.exp_power}};
    return {{"theta", env.theta}, {"gamma", env.gamma_exp}, {"C", env.rate}, {"t0", env.t0}, {"q", q}};
}

TailEnvelope parse_envelope_spec(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    std::string body;
    if (first != std::string_view::npos && text[first] == '{') {
        body = std::string(text);
    } else {
        std::ifstream in{std::string(text)};
        if (!in) throw ConfigError("envelope: cannot read file '" + std::string(text) + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        body = buf.str();
    }
    json doc = json::parse(body, nullptr, false);
    if (doc.is_discarded()) throw ConfigError("envelope: malformed JSON");
    return envelope_from_json(doc);
}

std::vector<std::string> apply_config_json(RunConfig& config, const json& doc,
                                           const std::set<std::string>& flags_given) {
    if (!doc.is_object()) throw ConfigError("config file: expected a JSON object");
    std::vector<std::string> warnings;
    for (const auto& [raw_key, value] : doc.items()) {
        const std::string key = normalise_key(raw_key);
        if (key == "envelope") {
            config.envelope = value.is_string() ? parse_envelope_spec(value.get<std::string>())
                                                : envelope_from_json(value);
        } else if (key == "t-grid") {
            config.t_grid = grid_from_json(value, key);
        } else if (key == "p-grid") {
            config.p_grid = grid_from_json(value, key);
        } else if (key == "rel-tol") {
            config.rel_tol = json_number(value, key);
        } else if (key == "seed") {
            if (!value.is_number_unsigned()) throw ConfigError("seed: expected a non-negative integer");
            config.seed = value.get<std::uint64_t>();
        } else if (key == "format") {
            if (!value.is_string()) throw ConfigError("format: expected a string");
            config.format = parse_format(value.get<std::string>());
        } else if (key == "out") {
            if (!value.is_string()) throw ConfigError("out: expected a string");
            config.out = value.get<std::string>();
        } else if (key == "linear") {
            if (!value.is_boolean()) throw ConfigError("linear: expected true or false");
            config.linear = value.get<bool>();
        } else if (key == "oracle") {
            if (!value.is_string()) throw ConfigError("oracle: expected a string");
            config.oracle = value.get<std::string>();
        } else if (key == "beta") {
            config.beta = json_number(value, key);
        } else if (key == "p-max") {
            config.p_max = json_number(value, key);
        } else if (key == "calib") {
            config.calib = json_number(value, key);
        } else if (key == "samples") {
            if (!value.is_number_unsigned()) throw ConfigError("samples: expected a positive integer");
            config.samples = value.get<std::size_t>();
        } else {
            throw ConfigError("config file: unknown key '" + raw_key + "'");
        }
        if (flags_given.count(key) != 0) {
            warnings.push_back("config file value for '" + key + "' overrides --" + key);
        }
    }
    return warnings;
}

std::vector<std::string> apply_config_file(RunConfig& config, const std::filesystem::path& path,
                                           const std::set<std::string>& flags_given) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config file: cannot read '" + path.string() + "'");
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded()) throw ConfigError("config file: malformed JSON in '" + path.string() + "'");
    return apply_config_json(config, doc, flags_given);
}

void RunConfig::validate() const {
    if (!(rel_tol >= 1e-12 && rel_tol <= 1e-2)) throw ConfigError("rel-tol must lie in [1e-12, 1e-2]");
    if (envelope) {
        try {
            envelope->validate();
        } catch (const DomainError& e) {
            throw ConfigError(std::string("envelope: ") + e.what());
        }
    }
    if (t_grid) check_grid(*t_grid, "t-grid", true);
    if (p_grid) {
        check_grid(*p_grid, "p-grid", true);
        if (p_grid->min < 1.0) throw ConfigError("p-grid: moments need p >= 1");
    }
    if (oracle) oracle_by_name(*oracle);
    if (beta && !(*beta > -1.0 && std::isfinite(*beta))) throw ConfigError("beta must be finite and > -1");
    if (!(p_max >= 10.0 && std::isfinite(p_max))) throw ConfigError("p-max must be finite and >= 10");
    if (calib && !(*calib > 0.0 && std::isfinite(*calib))) throw ConfigError("calib must be positive");
    if (samples < 1) throw ConfigError("samples must be at least 1");

    switch (command) {
        case Command::bound_tail:
            if (beta && envelope) throw ConfigError("bound-tail: give either --envelope or --beta, not both");
            break;
        case Command::tauberian:
            if (oracle && envelope) throw ConfigError("tauberian: give either --oracle or --envelope, not both");
            if (t_grid && t_grid->count < 8) throw ConfigError("tauberian: t-grid needs at least 8 points");
            if (p_grid && p_grid->count < 8) throw ConfigError("tauberian: p-grid needs at least 8 points");
            break;
        case Command::validate:
            if (envelope) throw ConfigError("validate: runs on a named oracle, not an envelope");
            break;
        default:
            break;
    }
}

}  // namespace tailmoment::cli
