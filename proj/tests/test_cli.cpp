#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "tailmoment/cli/commands.hpp"
#include "tailmoment/errors.hpp"
#include "tailmoment/special_functions.hpp"

using namespace tailmoment;
using namespace tailmoment::cli;

namespace {

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "tailmoment_test_cli";
    std::filesystem::create_directories(dir);
    const auto path = dir / name;
    std::filesystem::remove(path);
    return path;
}

double cell(const nlohmann::ordered_json& row, const char* key) { return row.at(key).get<double>(); }

}  // namespace

TEST_CASE("grid parsing") {
    const GridSpec g = parse_grid("1:10:10");
    CHECK(g.min == 1.0);
    CHECK(g.max == 10.0);
    CHECK(g.count == 10);
    CHECK_FALSE(g.geometric);
    CHECK(parse_grid("16:16384:12:geom").geometric);
    CHECK(parse_grid("2:3:2:lin").count == 2);
    CHECK(format_grid(parse_grid("16:16384:12:geom")) == "16:16384:12:geom");
    CHECK_THROWS_AS(parse_grid("1:10"), ConfigError);
    CHECK_THROWS_AS(parse_grid("1:x:10"), ConfigError);
    CHECK_THROWS_AS(parse_grid("1:10:2.5"), ConfigError);
    CHECK_THROWS_AS(parse_grid("1:10:5:log"), ConfigError);
}

TEST_CASE("envelope spec") {
    const TailEnvelope env = parse_envelope_spec(R"({"theta": 1.5, "gamma": 2, "C": 0.5, "q": {"a": 2}})");
    CHECK(env.theta == 1.5);
    CHECK(env.gamma_exp == 2.0);
    CHECK(env.rate == 0.5);
    CHECK(env.q.log_power == 2.0);
    CHECK(env.q.scale == 1.0);
    const TailEnvelope back = envelope_from_json(envelope_to_json(env));
    CHECK(back.theta == env.theta);
    CHECK(back.q.log_power == env.q.log_power);

    const auto path = scratch("env.json");
    std::ofstream(path) << R"({"theta": 0.25})";
    CHECK(parse_envelope_spec(path.string()).theta == 0.25);

    CHECK_THROWS_AS(parse_envelope_spec(R"({"theta": 1, "shape": 2})"), ConfigError);
    CHECK_THROWS_AS(parse_envelope_spec(R"({"theta": -1})"), ConfigError);
    CHECK_THROWS_AS(parse_envelope_spec(R"({"q": {"d": 1}})"), ConfigError);
    CHECK_THROWS_AS(parse_envelope_spec("{theta"), ConfigError);
    CHECK_THROWS_AS(parse_envelope_spec("/nonexistent/envelope.json"), ConfigError);
}

TEST_CASE("config file wins over flags, with a warning") {
    RunConfig config;
    config.seed = 9;
    config.rel_tol = 1e-6;
    const nlohmann::json doc = nlohmann::json::parse(R"({"seed": 5, "p_grid": "1:4:4", "linear": true})");
    const auto warnings = apply_config_json(config, doc, {"seed", "rel-tol"});
    CHECK(config.seed == 5);
    CHECK(config.rel_tol == 1e-6);
    CHECK(config.linear);
    REQUIRE(config.p_grid.has_value());
    CHECK(config.p_grid->count == 4);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("seed") != std::string::npos);

    CHECK_THROWS_AS(apply_config_json(config, nlohmann::json::parse(R"({"sed": 1})"), {}), ConfigError);
    CHECK_THROWS_AS(apply_config_json(config, nlohmann::json::parse(R"({"seed": -1})"), {}), ConfigError);
    CHECK_THROWS_AS(apply_config_json(config, nlohmann::json::parse("[1, 2]"), {}), ConfigError);
}

TEST_CASE("config validation") {
    RunConfig config;
    config.rel_tol = 0.5;
    CHECK_THROWS_AS(config.validate(), ConfigError);
    config = RunConfig{};
    config.command = Command::bound_tail;
    config.beta = 0.0;
    config.envelope = TailEnvelope{};
    CHECK_THROWS_AS(config.validate(), ConfigError);
    config = RunConfig{};
    config.command = Command::tauberian;
    config.t_grid = parse_grid("16:1024:7:geom");
    CHECK_THROWS_AS(config.validate(), ConfigError);
    config = RunConfig{};
    config.p_grid = parse_grid("0.5:4:4");
    CHECK_THROWS_AS(config.validate(), ConfigError);
    config = RunConfig{};
    config.oracle = "cauchy";
    CHECK_THROWS_AS(config.validate(), ConfigError);
}

TEST_CASE("bound-moment examples") {
    RunConfig config;
    config.command = Command::bound_moment;
    const CommandResult r = run_command(config);
    CHECK(r.exit_code == kExitOk);
    REQUIRE(r.table.rows.size() == 10);
    for (const auto& row : r.table.rows) {
        const double p = cell(row, "p");
        CHECK(cell(row, "quadrature") == doctest::Approx(log_gamma(p + 1.0)).epsilon(1e-9));
        CHECK(row.at("methods").get<std::string>() == "closed_beta;closed_general;quadrature");
        CHECK(row.at("closed_slowvary").is_null());
    }
    CHECK(std::abs(cell(r.table.rows[0], "closed_beta")) < 1e-15);

    config.envelope = parse_envelope_spec(R"({"gamma": 2})");
    config.p_grid = parse_grid("4:4:1");
    const CommandResult w = run_command(config);
    REQUIRE(w.table.rows.size() == 1);
    CHECK(cell(w.table.rows[0], "closed_general") == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(w.table.rows[0].at("closed_beta").is_null());
}

TEST_CASE("bound-moment flags an inadmissible slow-variation constant") {
    RunConfig config;
    config.command = Command::bound_moment;
    config.envelope = parse_envelope_spec(R"({"q": {"a": 2}})");
    config.p_grid = parse_grid("5:20:4");
    config.calib = 1.0;
    const CommandResult bad = run_command(config);
    CHECK(bad.exit_code == kExitCheckFailed);
    CHECK(bad.table.rows[0].at("dominance").get<std::string>() == "violated:closed_slowvary");
    config.calib = 3.0;
    CHECK(run_command(config).exit_code == kExitOk);
}

TEST_CASE("bound-tail examples") {
    RunConfig config;
    config.command = Command::bound_tail;
    config.beta = 0.0;
    config.t_grid = parse_grid("2:10:2");
    const CommandResult r = run_command(config);
    CHECK(r.exit_code == kExitOk);
    REQUIRE(r.table.rows.size() == 2);
    const auto& at2 = r.table.rows[0];
    const auto& at10 = r.table.rows[1];
    CHECK(cell(at2, "paper_p_eq_t") == doctest::Approx(std::log(0.5)).epsilon(1e-14));
    CHECK(cell(at10, "paper_p_eq_t") == doctest::Approx(std::log(3.6288e-4)).epsilon(1e-13));
    CHECK(cell(at10, "stirling_form") >= cell(at10, "paper_p_eq_t"));
    for (const auto& row : r.table.rows) {
        CHECK(cell(row, "optimized") <= cell(row, "paper_p_eq_t") + 1e-9);
        CHECK(cell(row, "optimized") <= cell(row, "prop21_L") + 1e-9);
        CHECK(cell(row, "optimized") <= cell(row, "prop42_general") + 1e-9);
        CHECK(row.at("dominance").get<std::string>() == "ok");
        CHECK(row.at("methods").get<std::string>().find("optimized") == 0);
    }
}

TEST_CASE("bound-tail on a Weibull envelope uses the power-law forms") {
    RunConfig config;
    config.command = Command::bound_tail;
    config.envelope = parse_envelope_spec(R"({"gamma": 2})");
    config.t_grid = parse_grid("1:6:6");
    const CommandResult r = run_command(config);
    CHECK(r.exit_code == kExitOk);
    for (const auto& row : r.table.rows) {
        CHECK(row.at("paper_p_eq_t").is_null());
        CHECK(row.at("prop21_L").is_null());
        CHECK_FALSE(row.at("prop42_general").is_null());
        const double t = cell(row, "t");
        CHECK(-t * t <= cell(row, "optimized") + 1e-12);
    }
}

TEST_CASE("gls-norm command") {
    RunConfig config;
    config.command = Command::gls_norm;
    const CommandResult r = run_command(config);
    REQUIRE(r.table.rows.size() == 1);
    CHECK(cell(r.table.rows[0], "norm") <= 1.0 + 1e-6);
    CHECK(r.table.rows[0].at("argmax_at_boundary").get<bool>() == false);
}

TEST_CASE("tauberian command") {
    RunConfig config;
    config.command = Command::tauberian;
    const CommandResult e = run_command(config);
    CHECK(e.table.rows.size() == 24);
    CHECK(e.table.summary["tail_limit"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
    // the c0 + c1 ln p/p model leaves an O(1/p) bias on Gamma(p+1) moments
    CHECK(std::abs(e.table.summary["moment_limit"].get<double>() - 1.0) < 5e-3);
    CHECK(e.table.summary["duality_passed"].get<bool>());

    config.oracle = "gamma3";
    const CommandResult g = run_command(config);
    CHECK(std::abs(g.table.summary["tail_limit"].get<double>() - 1.0) < 5e-3);
    CHECK(std::abs(g.table.summary["moment_limit"].get<double>() - 1.0) < 5e-3);

    config.oracle.reset();
    config.envelope = parse_envelope_spec(R"({"C": 2})");
    const CommandResult c = run_command(config);
    CHECK(c.table.summary["tail_limit"].get<double>() == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(c.table.summary["limit_product"].get<double>() == doctest::Approx(1.0).epsilon(5e-3));
}

TEST_CASE("validate passes on every oracle") {
    for (const char* name : {"exp1", "gamma3", "weibull2"}) {
        RunConfig config;
        config.command = Command::validate;
        config.oracle = name;
        config.samples = 200'000;
        const CommandResult r = run_command(config);
        CAPTURE(name);
        CHECK(r.exit_code == kExitOk);
        for (const auto& row : r.table.rows) {
            CAPTURE(row.at("check").get<std::string>());
            CHECK(row.at("status").get<std::string>() == "PASS");
        }
    }
}

TEST_CASE("rendering") {
    Table table;
    table.columns = {"x", "log_v", "note"};
    table.log_columns = {"log_v"};
    nlohmann::ordered_json a = nlohmann::ordered_json::object();
    a["x"] = 1;
    a["log_v"] = 0.0;
    a["note"] = "a,b";
    nlohmann::ordered_json b = nlohmann::ordered_json::object();
    b["x"] = 2.5;
    b["log_v"] = -1000.0;
    b["note"] = nullptr;
    table.rows = {a, b};
    table.summary["n"] = 2;

    CHECK(render(table, OutputFormat::csv, false) == "x,log_v,note\n1,0,\"a,b\"\n2.5,-1000,\n# n=2\n");
    CHECK(render(table, OutputFormat::csv, true) ==
          "x,log_v,note,linear_log_v\n1,0,\"a,b\",1\n2.5,-1000,,\n# n=2\n");

    const auto doc = nlohmann::json::parse(render(table, OutputFormat::json, true));
    CHECK(doc["columns"].size() == 4);
    CHECK(doc["rows"][1]["linear_log_v"].is_null());
    CHECK(doc["rows"][0]["linear_log_v"].get<double>() == 1.0);
    CHECK(doc["summary"]["n"] == 2);
}

TEST_CASE("execute writes byte-identical files and nothing on error") {
    RunConfig config;
    config.command = Command::validate;
    config.samples = 100'000;
    config.seed = 3;
    std::ostringstream out, err;

    const auto first = scratch("first.csv");
    const auto second = scratch("second.csv");
    config.out = first.string();
    CHECK(execute(config, out, err) == kExitOk);
    config.out = second.string();
    CHECK(execute(config, out, err) == kExitOk);
    CHECK(slurp(first) == slurp(second));
    CHECK_FALSE(slurp(first).empty());
    CHECK(out.str().empty());

    const auto broken = scratch("broken.csv");
    config.out = broken.string();
    config.rel_tol = 2.0;
    CHECK(execute(config, out, err) == kExitConfig);
    CHECK_FALSE(std::filesystem::exists(broken));
    CHECK(err.str().find("rel-tol") != std::string::npos);
}
