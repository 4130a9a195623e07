#include <iostream>
#include <set>
#include <string>

#include "CLI11.hpp"
#include "tailmoment/cli/commands.hpp"
#include "tailmoment/errors.hpp"

using namespace tailmoment;
using namespace tailmoment::cli;

namespace {

struct FlagValues {
    std::string envelope;
    std::string t_grid;
    std::string p_grid;
    double rel_tol = kDefaultRelTol;
    std::uint64_t seed = 1;
    std::string format = "csv";
    std::string out;
    bool linear = false;
    std::string oracle;
    double beta = 0.0;
    double p_max = 200.0;
    double calib = 1.0;
    std::size_t samples = 1'000'000;
    std::string config;
};

void add_common(CLI::App* sub, FlagValues& v) {
    sub->add_option("--envelope", v.envelope, "Envelope as inline JSON {theta, gamma, C, t0, q: {c, a, b, d}} or a file");
    sub->add_option("--t-grid", v.t_grid, "t grid min:max:count[:geom]");
    sub->add_option("--p-grid", v.p_grid, "p grid min:max:count[:geom]");
    sub->add_option("--rel-tol", v.rel_tol, "Quadrature relative tolerance");
    sub->add_option("--seed", v.seed, "Random seed");
    sub->add_option("--format", v.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", v.out, "Output path (default: standard output)");
    sub->add_flag("--linear", v.linear, "Also emit exponentiated log columns");
    sub->add_option("--config", v.config, "JSON config file; its values win over flags");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tail and moment bounds for generalized Gamma-Weibull tails"};
    app.require_subcommand(1);
    FlagValues v;

    auto* bound_moment = app.add_subcommand("bound-moment", "Moment bounds from a tail envelope");
    add_common(bound_moment, v);
    bound_moment->add_option("--calib", v.calib, "Constant for the slowly varying moment bound");

    auto* bound_tail = app.add_subcommand("bound-tail", "Tail bounds from moments");
    add_common(bound_tail, v);
    bound_tail->add_option("--beta", v.beta, "Use moments p Gamma(p + beta) instead of an envelope");

    auto* gls = app.add_subcommand("gls-norm", "Grand Lebesgue norm of an envelope's moments");
    add_common(gls, v);
    gls->add_option("--beta", v.beta, "psi_beta index (default: envelope theta)");
    gls->add_option("--p-max", v.p_max, "Upper end of the p range");

    auto* taub = app.add_subcommand("tauberian", "Tail and moment ratio limits");
    add_common(taub, v);
    taub->add_option("--oracle", v.oracle, "exp1, gamma3 or weibull2");

    auto* validate = app.add_subcommand("validate", "Run the invariant suite on an oracle");
    add_common(validate, v);
    validate->add_option("--oracle", v.oracle, "exp1, gamma3 or weibull2");
    validate->add_option("--samples", v.samples, "Monte Carlo sample size");

    CLI11_PARSE(app, argc, argv);

    CLI::App* sub = app.get_subcommands().front();
    RunConfig config;
    std::set<std::string> given;
    try {
        config.command = parse_command(sub->get_name());
        auto set = [&](const char* flag) {
            const std::string name = std::string("--") + flag;
            const CLI::Option* o = sub->get_option_no_throw(name);
            if (o == nullptr || o->count() == 0) return false;
            given.insert(flag);
            return true;
        };
        if (set("envelope")) config.envelope = parse_envelope_spec(v.envelope);
        if (set("t-grid")) config.t_grid = parse_grid(v.t_grid);
        if (set("p-grid")) config.p_grid = parse_grid(v.p_grid);
        if (set("rel-tol")) config.rel_tol = v.rel_tol;
        if (set("seed")) config.seed = v.seed;
        if (set("format")) config.format = parse_format(v.format);
        if (set("out")) config.out = v.out;
        if (set("linear")) config.linear = v.linear;
        if (set("oracle")) config.oracle = v.oracle;
        if (set("beta")) config.beta = v.beta;
        if (set("p-max")) config.p_max = v.p_max;
        if (set("calib")) config.calib = v.calib;
        if (set("samples")) config.samples = v.samples;
        if (!v.config.empty()) {
            for (const auto& w : apply_config_file(config, v.config, given)) std::cerr << "warning: " << w << '\n';
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return execute(config, std::cout, std::cerr);
}
