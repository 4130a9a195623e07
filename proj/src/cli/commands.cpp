#include "tailmoment/cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "tailmoment/errors.hpp"
#include "tailmoment/gls_norm.hpp"
#include "tailmoment/moment_to_tail.hpp"
#include "tailmoment/oracle.hpp"
#include "tailmoment/tail_to_moment.hpp"
#include "tailmoment/tauberian.hpp"

namespace tailmoment::cli {

namespace {

using Row = nlohmann::ordered_json;

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string short_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// JSON cannot hold inf/nan; such values become null.
Row number(double v) { return std::isfinite(v) ? Row(v) : Row(nullptr); }

std::string csv_cell(const Row& v) {
    if (v.is_null()) return "";
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) return format_double(v.get<double>());
    std::string s = v.is_string() ? v.get<std::string>() : v.dump();
    if (s.find_first_of(",\"\n") != std::string::npos) {
        std::string quoted = "\"";
        for (char c : s) {
            if (c == '"') quoted += '"';
            quoted += c;
        }
        return quoted + '"';
    }
    return s;
}

std::string join(const std::vector<std::string>& parts, char sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i != 0) out += sep;
        out += parts[i];
    }
    return out;
}

/// Evaluates make_row(i) for i in [0, n) on a small thread pool; rows keep grid order.
std::vector<Row> compute_rows(Eigen::Index n, const std::function<Row(Eigen::Index)>& make_row) {
    std::vector<Row> rows(static_cast<std::size_t>(n));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
    std::atomic<Eigen::Index> next{0};
    auto work = [&] {
        for (Eigen::Index i = next++; i < n; i = next++) {
            try {
                rows[static_cast<std::size_t>(i)] = make_row(i);
            } catch (...) {
                errors[static_cast<std::size_t>(i)] = std::current_exception();
            }
        }
    };
    const auto workers = static_cast<Eigen::Index>(
        std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()), 8u));
    {
        std::vector<std::jthread> pool;
        for (Eigen::Index w = 1; w < std::min(workers, n); ++w) pool.emplace_back(work);
        work();
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return rows;
}

std::optional<double> try_log(const std::function<double()>& f) {
    try {
        return f();
    } catch (const DomainError&) {
        return std::nullopt;
    }
}

Row opt(const std::optional<double>& v) { return v ? number(*v) : Row(nullptr); }

TailEnvelope envelope_or_default(const RunConfig& config) {
    return config.envelope.value_or(TailEnvelope::gamma_type(0.0));
}

bool constant_q_at_most_one(const SlowVaryFactor& q) { return q.is_constant() && q.log_eval(0.0) <= 0.0; }

}  // namespace

std::string render(const Table& table, OutputFormat format, bool linear) {
    std::vector<std::string> columns = table.columns;
    std::vector<Row> rows = table.rows;
    if (linear) {
        for (const auto& c : table.log_columns) columns.push_back("linear_" + c);
        for (auto& row : rows) {
            for (const auto& c : table.log_columns) {
                const Row& v = row.contains(c) ? row[c] : Row(nullptr);
                Row lin = nullptr;
                if (v.is_number()) {
                    const double x = std::exp(v.get<double>());
                    if (x > 1e-300 && std::isfinite(x)) lin = x;
                }
                row["linear_" + c] = lin;
            }
        }
    }

    std::ostringstream out;
    if (format == OutputFormat::json) {
        Row doc = Row::object();
        doc["columns"] = columns;
        Row array = Row::array();
        for (const auto& row : rows) {
            Row ordered = Row::object();
            for (const auto& c : columns) ordered[c] = row.contains(c) ? row[c] : Row(nullptr);
            array.push_back(std::move(ordered));
        }
        doc["rows"] = std::move(array);
        doc["summary"] = table.summary;
        out << doc.dump(2) << '\n';
        return out.str();
    }

    out << join(columns, ',') << '\n';
    for (const auto& row : rows) {
        std::vector<std::string> cells;
        cells.reserve(columns.size());
        for (const auto& c : columns) cells.push_back(row.contains(c) ? csv_cell(row[c]) : "");
        out << join(cells, ',') << '\n';
    }
    for (const auto& [key, value] : table.summary.items()) {
        out << "# " << key << '=' << (value.is_string() ? value.get<std::string>() : csv_cell(value)) << '\n';
    }
    return out.str();
}

CommandResult cmd_bound_moment(const RunConfig& config) {
    const TailEnvelope env = envelope_or_default(config);
    const GridSpec grid = config.p_grid.value_or(GridSpec{1.0, 10.0, 10, false});
    const Eigen::ArrayXd ps = grid.points();

    const bool unit_rate = env.rate == 1.0;
    // min(1, c t^theta e^{-t}) with c <= 1 sits under t^theta e^{-t}
    const bool beta_ok = env.gamma_exp == 1.0 && unit_rate && constant_q_at_most_one(env.q);
    const bool general_ok = unit_rate && env.q.is_constant();
    const bool slow_ok = config.calib.has_value() && env.gamma_exp == 1.0 && unit_rate;
    const double slack = std::log1p(10.0 * config.rel_tol) + 1e-12;

    CommandResult result;
    Table& table = result.table;
    table.columns = {"p", "methods", "closed_beta", "closed_general", "closed_slowvary", "quadrature",
                     "quadrature_rel_error", "dominance"};
    table.log_columns = {"closed_beta", "closed_general", "closed_slowvary", "quadrature"};

    table.rows = compute_rows(ps.size(), [&](Eigen::Index i) {
        const double p = ps(i);
        std::vector<std::string> methods;
        std::optional<double> closed_beta, closed_general, closed_slow;
        if (beta_ok) closed_beta = try_log([&] { return moment_upper_beta(env.theta, p).log_value; });
        if (closed_beta) methods.emplace_back(to_string(MomentMethod::closed_beta));
        if (general_ok) {
            closed_general = try_log([&] { return moment_upper_general(p, env.theta, env.gamma_exp, env.q).log_value; });
        }
        if (closed_general) methods.emplace_back(to_string(MomentMethod::closed_general));
        if (slow_ok) {
            closed_slow = try_log([&] { return moment_upper_slowvary(p, env.theta, env.q, *config.calib).log_value; });
        }
        if (closed_slow) methods.emplace_back(to_string(MomentMethod::closed_slowvary));
        const MomentBound quad = moment_quadrature(env, p, config.rel_tol);
        methods.emplace_back(to_string(MomentMethod::quadrature));

        std::vector<std::string> violated;
        if (closed_beta && quad.log_value > *closed_beta + slack) violated.emplace_back("closed_beta");
        if (closed_general && quad.log_value > *closed_general + slack) violated.emplace_back("closed_general");
        if (closed_slow && quad.log_value > *closed_slow + slack) violated.emplace_back("closed_slowvary");

        Row row = Row::object();
        row["p"] = p;
        row["methods"] = join(methods, ';');
        row["closed_beta"] = opt(closed_beta);
        row["closed_general"] = opt(closed_general);
        row["closed_slowvary"] = opt(closed_slow);
        row["quadrature"] = number(quad.log_value);
        row["quadrature_rel_error"] = number(quad.rel_error);
        row["dominance"] = violated.empty() ? std::string("ok") : "violated:" + join(violated, ';');
        return row;
    });

    std::size_t violations = 0;
    for (const auto& row : table.rows) {
        if (row["dominance"].get<std::string>() != "ok") {
            ++violations;
            result.messages.push_back("dominance violated at p=" + format_double(row["p"].get<double>()) + ": " +
                                      row["dominance"].get<std::string>());
        }
    }
    if (slow_ok && !passes_slow_variation(env.q)) {
        result.messages.push_back("warning: Q fails the slow-variation check; closed_slowvary is not backed by it");
    }
    if (env.negative_theta()) result.messages.push_back("warning: theta < 0 lies outside the theta >= 0 setting");

    table.summary["command"] = "bound-moment";
    table.summary["envelope"] = envelope_to_json(env).dump();
    table.summary["p_grid"] = format_grid(grid);
    table.summary["rel_tol"] = config.rel_tol;
    if (config.calib) table.summary["calib"] = *config.calib;
    table.summary["violations"] = violations;
    result.exit_code = violations == 0 ? kExitOk : kExitCheckFailed;
    return result;
}

CommandResult cmd_bound_tail(const RunConfig& config) {
    const GridSpec grid = config.t_grid.value_or(GridSpec{2.0, 50.0, 25, false});
    const Eigen::ArrayXd ts = grid.points();

    // --beta means moments p Gamma(p + beta), i.e. the envelope t^beta e^{-t}
    const bool beta_source = config.beta.has_value();
    const TailEnvelope env = beta_source ? TailEnvelope::gamma_type(*config.beta) : envelope_or_default(config);
    const double theta = env.theta;
    const double g = env.gamma_exp;

    const double t_max = ts.maxCoeff();
    const double p_cap = std::min(1e6, std::max(50.0, 3.0 * g * env.rate * std::pow(t_max, g) + 10.0 * std::abs(theta) + 10.0));
    const MomentEnvelope moments = beta_source ? MomentEnvelope::gamma_bound(theta, 1.0, p_cap)
                                               : quadrature_moments(env, 1.0, p_cap, config.rel_tol);

    const bool unit = g == 1.0 && env.rate == 1.0;
    const bool pet_ok = unit && constant_q_at_most_one(env.q);
    const bool prop42_ok = env.rate == 1.0 && env.q.is_constant();

    std::optional<Prop21Fit> fit;
    if (unit) {
        std::vector<double> s;
        for (double t : ts) {
            if (t >= theta + 1.0 && t > 0.0 && t - theta >= 1.0 && t - theta <= p_cap) s.push_back(t);
        }
        if (!s.empty()) {
            fit = fit_prop21_factor(moments, theta, env.q, Eigen::Map<const Eigen::ArrayXd>(s.data(), Eigen::Index(s.size())));
        }
    }

    const double slack = std::log1p(10.0 * config.rel_tol) + 1e-9;

    CommandResult result;
    Table& table = result.table;
    table.columns = {"t", "methods", "optimized", "optimizer_p", "domain_too_small", "paper_p_eq_t", "stirling_form",
                     "prop21_L", "prop42_general", "prop42_stirling", "dominance"};
    table.log_columns = {"optimized", "paper_p_eq_t", "stirling_form", "prop21_L", "prop42_general", "prop42_stirling"};

    table.rows = compute_rows(ts.size(), [&](Eigen::Index i) {
        const double t = ts(i);
        const TailBound opt_bound = tail_chebyshev_optimized(moments, t);
        std::vector<std::string> methods{std::string(to_string(TailMethod::optimized))};
        std::optional<double> pet, stirling, prop21, p42, p42s;
        if (pet_ok) {
            pet = try_log([&] { return tail_paper_p_eq_t(theta, t).log_value; });
            stirling = try_log([&] { return tail_stirling_form(theta, t).log_value; });
        }
        if (fit && t >= theta + 1.0 && t - theta >= 1.0 && t - theta <= p_cap) {
            prop21 = try_log([&] { return tail_prop21(theta, fit->log_l, t).log_value; });
        }
        const double tau = std::pow(t, g);
        if (prop42_ok && tau >= 1.0) {
            p42 = try_log([&] { return tail_prop42(theta, g, env.q, tau, false).log_value; });
            p42s = try_log([&] { return tail_prop42(theta, g, env.q, tau, true).log_value; });
        }
        if (pet) methods.emplace_back(to_string(TailMethod::paper_p_eq_t));
        if (stirling) methods.emplace_back(to_string(TailMethod::stirling_form));
        if (prop21) methods.emplace_back(to_string(TailMethod::prop21_L));
        if (p42) methods.emplace_back(to_string(TailMethod::prop42_general));
        if (p42s) methods.emplace_back(to_string(TailMethod::prop42_stirling));

        // only forms that are Markov bounds on these moments are held to dominance
        std::vector<std::string> violated;
        auto check = [&](const std::optional<double>& v, bool certified, const char* name) {
            if (v && certified && opt_bound.log_value > *v + slack) violated.emplace_back(name);
        };
        check(pet, theta >= 0.0, "paper_p_eq_t");
        check(stirling, theta >= 0.0, "stirling_form");
        check(prop21, true, "prop21_L");
        check(p42, g * tau >= 1.0 && g * tau <= p_cap, "prop42_general");
        check(p42s, theta >= 0.0 && g * tau >= 1.0 && g * tau <= p_cap, "prop42_stirling");

        Row row = Row::object();
        row["t"] = t;
        row["methods"] = join(methods, ';');
        row["optimized"] = number(opt_bound.log_value);
        row["optimizer_p"] = opt_bound.optimizer_p ? number(*opt_bound.optimizer_p) : Row(nullptr);
        row["domain_too_small"] = opt_bound.domain_too_small;
        row["paper_p_eq_t"] = opt(pet);
        row["stirling_form"] = opt(stirling);
        row["prop21_L"] = opt(prop21);
        row["prop42_general"] = opt(p42);
        row["prop42_stirling"] = opt(p42s);
        row["dominance"] = violated.empty() ? std::string("ok") : "violated:" + join(violated, ';');
        return row;
    });

    std::size_t violations = 0;
    for (const auto& row : table.rows) {
        if (row["dominance"].get<std::string>() != "ok") {
            ++violations;
            result.messages.push_back("dominance violated at t=" + format_double(row["t"].get<double>()) + ": " +
                                      row["dominance"].get<std::string>());
        }
        if (row["domain_too_small"].get<bool>()) {
            result.messages.push_back("warning: optimizer reached p_max at t=" + format_double(row["t"].get<double>()));
        }
    }

    table.summary["command"] = "bound-tail";
    table.summary["moment_source"] = beta_source ? "p*Gamma(p+beta)" : "quadrature";
    table.summary["envelope"] = envelope_to_json(env).dump();
    table.summary["t_grid"] = format_grid(grid);
    table.summary["p_max"] = p_cap;
    table.summary["rel_tol"] = config.rel_tol;
    if (fit) table.summary["prop21_log_k"] = fit->log_k;
    table.summary["violations"] = violations;
    result.exit_code = violations == 0 ? kExitOk : kExitCheckFailed;
    return result;
}

CommandResult cmd_gls_norm(const RunConfig& config) {
    const TailEnvelope env = envelope_or_default(config);
    const double beta = config.beta.value_or(env.theta);
    const PsiFunction psi(beta);
    const MomentEnvelope moments = quadrature_moments(env, 1.0, config.p_max, config.rel_tol);
    const GlsNormResult r = gls_norm(moments, psi, config.p_max);

    CommandResult result;
    Table& table = result.table;
    table.columns = {"beta", "p_max", "method", "norm", "argmax_p", "argmax_at_boundary"};
    Row row = Row::object();
    row["beta"] = beta;
    row["p_max"] = config.p_max;
    row["method"] = std::string(to_string(MomentMethod::quadrature));
    row["norm"] = number(r.norm);
    row["argmax_p"] = r.argmax_p;
    row["argmax_at_boundary"] = r.argmax_at_boundary;
    table.rows.push_back(std::move(row));
    if (r.argmax_at_boundary) {
        result.messages.push_back("warning: supremum attained at p_max; the norm over all p may be larger");
    }
    table.summary["command"] = "gls-norm";
    table.summary["envelope"] = envelope_to_json(env).dump();
    table.summary["rel_tol"] = config.rel_tol;
    return result;
}

CommandResult cmd_tauberian(const RunConfig& config) {
    // ratios |ln T|/t and ||xi||_p e/p only have finite limits for gamma = 1,
    // so other shapes go through xi^gamma first
    std::optional<OracleDistribution> oracle;
    double transformed = 1.0;
    if (config.envelope) {
        const TailEnvelope& env = *config.envelope;
        transformed = env.gamma_exp;
        oracle = OracleDistribution::from_envelope(env.gamma_exp == 1.0 ? env : power_transform(env));
    } else {
        const std::string name = config.oracle.value_or("exp1");
        oracle = oracle_by_name(name);
        if (name == "weibull2") {
            transformed = 2.0;
            oracle = oracle->power_transformed(2.0);
        }
    }
    const GridSpec fallback{16.0, 16384.0, 12, true};
    const GridSpec tg = config.t_grid.value_or(fallback);
    const GridSpec pg = config.p_grid.value_or(fallback);
    const DualityReport r = duality_check(*oracle, tg.points(), pg.points());

    CommandResult result;
    Table& table = result.table;
    table.columns = {"kind", "x", "ratio"};
    auto add = [&table](const char* kind, const LimitDiagnostic& d) {
        for (Eigen::Index i = 0; i < d.grid.size(); ++i) {
            Row row = Row::object();
            row["kind"] = kind;
            row["x"] = d.grid(i);
            row["ratio"] = number(d.ratios(i));
            table.rows.push_back(std::move(row));
        }
    };
    add("tail", r.tail);
    add("moment", r.moment);

    Row& s = table.summary;
    s["command"] = "tauberian";
    s["source"] = oracle->name();
    s["power_transform"] = transformed;
    s["tail_limit"] = r.tail.limit_estimate;
    s["tail_log_coefficient"] = r.tail.log_coefficient;
    s["tail_residual"] = r.tail.residual;
    s["moment_limit"] = r.moment.limit_estimate;
    s["moment_log_coefficient"] = r.moment.log_coefficient;
    s["moment_residual"] = r.moment.residual;
    s["limit_product"] = r.tail.limit_estimate * r.moment.limit_estimate;
    s["discrepancy"] = r.discrepancy;
    s["tolerance"] = r.tolerance;
    s["duality_passed"] = r.passed;
    return result;
}

namespace {

struct ValidationPlan {
    double beta = 0.0;
    double closed_min_t = 0.0;  // closed forms in beta hold from here on
    bool gamma_type = true;     // paper_p_eq_t, stirling_form, prop21_L apply
    double prop42_theta = 0.0;
    double prop42_gamma = 1.0;
    double psi_beta = 0.0;
    bool gls_unit = true;  // norm <= 1; otherwise finite with an interior argmax
    double transform = 1.0;
};

ValidationPlan plan_for(const std::string& name) {
    if (name == "exp1") return {0.0, 1.0, true, 0.0, 1.0, 0.0, true, 1.0};
    // Gamma(p+3)/2 <= p Gamma(p+2) needs p >= 2, hence t >= 3
    if (name == "gamma3") return {2.0, 3.0, true, 2.0, 1.0, 2.0, false, 1.0};
    return {0.0, 1.0, false, 0.0, 2.0, 0.0, true, 2.0};
}

}  // namespace

CommandResult cmd_validate(const RunConfig& config) {
    const std::string name = config.oracle.value_or("exp1");
    const OracleDistribution d = oracle_by_name(name);
    const ValidationPlan plan = plan_for(name);

    CommandResult result;
    Table& table = result.table;
    table.columns = {"check", "status", "margin", "detail"};
    auto add = [&table](std::string check, bool pass, double margin, std::string detail) {
        Row row = Row::object();
        row["check"] = std::move(check);
        row["status"] = pass ? "PASS" : "FAIL";
        row["margin"] = number(margin);
        row["detail"] = std::move(detail);
        table.rows.push_back(std::move(row));
    };

    // soundness: log true tail <= log bound
    Eigen::ArrayXd ts(6);
    ts << 2.0, 3.0, 5.0, 10.0, 20.0, 50.0;
    if (config.t_grid) ts = config.t_grid->points();
    const double g = plan.prop42_gamma;
    const double p_cap = std::max(50.0, 3.0 * g * std::pow(ts.maxCoeff(), g) + 30.0);
    const MomentEnvelope moments = d.moments(1.0, p_cap);
    std::optional<Prop21Fit> fit;
    if (plan.gamma_type) {
        std::vector<double> s;
        for (double t : ts) {
            if (t >= plan.closed_min_t && t >= plan.beta + 1.0 && t > 1.0) s.push_back(t);
        }
        if (!s.empty()) {
            fit = fit_prop21_factor(moments, plan.beta, SlowVaryFactor::constant(),
                                    Eigen::Map<const Eigen::ArrayXd>(s.data(), Eigen::Index(s.size())));
        }
    }
    auto sound = [&](const char* method, double t, double bound) {
        const double truth = d.log_tail(t);
        const double margin = bound - truth;
        const bool pass = margin >= -1e-12 * std::max(1.0, std::abs(truth));
        add(std::string("soundness/") + method + "/t=" + short_double(t), pass, margin,
            "log_tail=" + short_double(truth) + " log_bound=" + short_double(bound));
    };
    for (double t : ts) {
        sound("optimized", t, tail_chebyshev_optimized(moments, t).log_value);
        const bool closed = t >= plan.closed_min_t && t >= plan.beta + 1.0 && t > 1.0;
        if (plan.gamma_type && closed) {
            sound("paper_p_eq_t", t, tail_paper_p_eq_t(plan.beta, t).log_value);
            sound("stirling_form", t, tail_stirling_form(plan.beta, t).log_value);
            if (fit) sound("prop21_L", t, tail_prop21(plan.beta, fit->log_l, t).log_value);
        }
        const double tau = std::pow(t, g);
        if (tau >= 1.0 && t >= plan.closed_min_t) {
            const auto one = SlowVaryFactor::constant();
            sound("prop42_general", t, tail_prop42(plan.prop42_theta, g, one, tau, false).log_value);
            sound("prop42_stirling", t, tail_prop42(plan.prop42_theta, g, one, tau, true).log_value);
        }
    }

    // membership in G psi_beta
    {
        const OracleDistribution target = plan.transform == 1.0 ? d : d.power_transformed(plan.transform);
        const GlsNormResult r = gls_norm(target.moments(1.0, 200.0), PsiFunction(plan.psi_beta), 200.0);
        const std::string detail = "target=" + target.name() + " psi_beta=" + short_double(plan.psi_beta) +
                                   " norm=" + format_double(r.norm) + " argmax_p=" + short_double(r.argmax_p);
        if (plan.gls_unit) {
            add("gls/norm<=1", r.norm <= 1.0 + 1e-6, 1.0 + 1e-6 - r.norm, detail);
        } else {
            add("gls/finite", std::isfinite(r.norm) && !r.argmax_at_boundary, std::log(200.0 / r.argmax_p), detail);
        }
    }

    // Tauberian duality on the gamma = 1 scale
    {
        const OracleDistribution target = plan.transform == 1.0 ? d : d.power_transformed(plan.transform);
        const Eigen::ArrayXd grid = default_tauberian_grid();
        const DualityReport r = duality_check(target, grid, grid);
        const double worst = std::max({r.discrepancy, std::abs(r.tail.limit_estimate - 1.0),
                                       std::abs(r.moment.limit_estimate - 1.0)});
        add("duality", r.passed && r.tail_unit && r.moment_unit, r.tolerance - worst,
            "target=" + target.name() + " tail_limit=" + format_double(r.tail.limit_estimate) +
                " moment_limit=" + format_double(r.moment.limit_estimate) +
                " tolerance=" + short_double(r.tolerance));
    }

    // Monte Carlo against quadrature, in standard errors
    {
        const SampleBatch batch = sample(d, config.samples, config.seed);
        for (double p : {1.0, 2.0, 4.0, 8.0}) {
            const MomentEstimate est = empirical_moment(batch, p);
            const double truth = std::exp(d.log_moment_quadrature(p, std::min(config.rel_tol, 1e-10)));
            const double diff = std::abs(est.estimate - truth);
            const double z = est.std_error > 0.0 ? diff / est.std_error : (diff == 0.0 ? 0.0 : 1e300);
            add("monte_carlo/p=" + short_double(p), z <= 4.0, 4.0 - z,
                "estimate=" + format_double(est.estimate) + " quadrature=" + format_double(truth) +
                    " std_error=" + short_double(est.std_error) + " n=" + std::to_string(batch.size()));
        }
    }

    std::size_t failures = 0;
    for (const auto& row : table.rows) {
        if (row["status"] == "FAIL") {
            ++failures;
            result.messages.push_back("check failed: " + row["check"].get<std::string>());
        }
    }
    table.summary["command"] = "validate";
    table.summary["oracle"] = name;
    table.summary["seed"] = config.seed;
    table.summary["samples"] = config.samples;
    table.summary["checks"] = table.rows.size();
    table.summary["failures"] = failures;
    result.exit_code = failures == 0 ? kExitOk : kExitCheckFailed;
    return result;
}

CommandResult run_command(const RunConfig& config) {
    switch (config.command) {
        case Command::bound_moment: return cmd_bound_moment(config);
        case Command::bound_tail: return cmd_bound_tail(config);
        case Command::gls_norm: return cmd_gls_norm(config);
        case Command::tauberian: return cmd_tauberian(config);
        case Command::validate: return cmd_validate(config);
    }
    throw ConfigError("unknown command");
}

int execute(const RunConfig& config, std::ostream& out, std::ostream& err) {
    CommandResult result;
    try {
        config.validate();
        result = run_command(config);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << " (partial relative error " << e.partial_rel_error() << ")\n";
        return kExitNumeric;
    } catch (const BracketError& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumeric;
    }
    for (const auto& m : result.messages) err << m << '\n';

    const std::string text = render(result.table, config.format, config.linear);
    if (config.out.empty()) {
        out << text;
        return result.exit_code;
    }
    const std::filesystem::path path(config.out);
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
        file << text;
        if (!file) {
            err << "error: cannot write '" << tmp.string() << "'\n";
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            return kExitConfig;
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        err << "error: cannot write '" << path.string() << "': " << ec.message() << '\n';
        std::filesystem::remove(tmp, ec);
        return kExitConfig;
    }
    return result.exit_code;
}

}  // namespace tailmoment::cli
