#include "tailmoment/moment_to_tail.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tailmoment/errors.hpp"
#include "tailmoment/grid.hpp"
#include "tailmoment/special_functions.hpp"

namespace tailmoment {

namespace {

double cap(double log_value) { return std::min(0.0, log_value); }

void require_t_above_beta(double beta, double t, const char* op) {
    if (!std::isfinite(t) || !std::isfinite(beta)) throw DomainError(std::string(op) + ": arguments must be finite");
    if (t < beta + 1.0) throw DomainError(std::string(op) + ": requires t >= beta + 1");
}

}  // namespace

std::string_view to_string(TailMethod method) {
    switch (method) {
        case TailMethod::paper_p_eq_t: return "paper_p_eq_t";
        case TailMethod::stirling_form: return "stirling_form";
        case TailMethod::prop21_L: return "prop21_L";
        case TailMethod::prop42_general: return "prop42_general";
        case TailMethod::prop42_stirling: return "prop42_stirling";
        case TailMethod::optimized: return "optimized";
    }
    return "unknown";
}

TailBound tail_chebyshev_optimized(const MomentEnvelope& m, double t) {
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("tail_chebyshev_optimized: t must be positive");
    const double log_t = std::log(t);
    auto objective = [&](double p) { return m.log_moment(p) - p * log_t; };

    constexpr Eigen::Index kScan = 64;
    const Eigen::Index n = m.p_max() > m.p_min() ? kScan : 1;
    const Eigen::ArrayXd grid = geometric_grid(m.p_min(), m.p_max(), n);
    Eigen::ArrayXd values(n);
    for (Eigen::Index i = 0; i < n; ++i) values(i) = objective(grid(i));

    Eigen::Index best_i = 0;
    values.minCoeff(&best_i);
    double best_p = grid(best_i);
    double best_value = values(best_i);

    if (n > 1) {
        double lo = grid(std::max<Eigen::Index>(best_i - 1, 0));
        double hi = grid(std::min<Eigen::Index>(best_i + 1, n - 1));
        const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
        double x1 = hi - inv_phi * (hi - lo);
        double x2 = lo + inv_phi * (hi - lo);
        double f1 = objective(x1);
        double f2 = objective(x2);
        while (hi - lo > 1e-6 * 0.5 * (hi + lo)) {
            if (f1 <= f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - inv_phi * (hi - lo);
                f1 = objective(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + inv_phi * (hi - lo);
                f2 = objective(x2);
            }
        }
        if (f1 < best_value) {
            best_value = f1;
            best_p = x1;
        }
        if (f2 < best_value) {
            best_value = f2;
            best_p = x2;
        }
    }

    TailBound bound{t, cap(best_value), TailMethod::optimized, best_p};
    bound.domain_too_small = n > 1 && best_i == n - 1 && best_p >= m.p_max() * (1.0 - 1e-6);
    return bound;
}

TailBound tail_paper_p_eq_t(double beta, double t) {
    require_t_above_beta(beta, t, "tail_paper_p_eq_t");
    if (!(t > 1.0)) throw DomainError("tail_paper_p_eq_t: requires t > 1");
    return {t, cap(-t * std::log(t) + log_gamma(t + beta + 1.0)), TailMethod::paper_p_eq_t};
}

TailBound tail_stirling_form(double beta, double t) {
    require_t_above_beta(beta, t, "tail_stirling_form");
    if (!(t > 1.0)) throw DomainError("tail_stirling_form: requires t > 1");
    const double log_c2 = stirling_constants<double>().log_c2;
    return {t, cap(log_c2 + (beta + 0.5) * std::log(t + beta) - t), TailMethod::stirling_form};
}

TailBound tail_prop21(double beta, const SlowVaryFactor& l_factor, double t) {
    l_factor.validate();
    return tail_prop21(beta, [&l_factor](double s) { return l_factor.log_eval(s); }, t);
}

TailBound tail_prop21(double beta, const std::function<double(double)>& log_l, double t) {
    require_t_above_beta(beta, t, "tail_prop21");
    if (!(t > 0.0)) throw DomainError("tail_prop21: requires t > 0");
    return {t, cap(beta * std::log(t) - t + log_l(t)), TailMethod::prop21_L};
}

Prop21Fit fit_prop21_factor(const MomentEnvelope& m, double beta, const SlowVaryFactor& q_factor,
                            const Eigen::ArrayXd& s_values) {
    q_factor.validate();
    if (s_values.size() == 0) throw DomainError("fit_prop21_factor: empty s grid");
    double log_k = -std::numeric_limits<double>::infinity();
    for (double s : s_values) {
        if (!(s > 0.0)) throw DomainError("fit_prop21_factor: s must be positive");
        const double reference = s * std::log(s) - s + 0.5 * std::log(s) + q_factor.log_eval(s);
        log_k = std::max(log_k, m.log_moment(s - beta) - reference);
    }
    return {log_k, [log_k, q_factor](double s) { return log_k + 0.5 * std::log(s) + q_factor.log_eval(s); }};
}

TailBound tail_prop42(double theta, double gamma_exp, const SlowVaryFactor& q_factor, double t, bool use_stirling) {
    if (!std::isfinite(t) || t < 1.0) throw DomainError("tail_prop42: requires t >= 1");
    if (!(gamma_exp > 0.0) || !std::isfinite(theta)) throw DomainError("tail_prop42: bad theta/gamma");
    q_factor.validate();
    const double shift = theta / gamma_exp;
    const double s = t + shift;
    if (!(s > 0.0)) throw DomainError("tail_prop42: requires t + theta/gamma > 0");
    const double abscissa = std::pow(t, 1.0 / gamma_exp);
    if (use_stirling) {
        const double log_c2 = stirling_constants<double>().log_c2;
        const double v = log_c2 + 0.5 * std::log(t) - t + shift * std::log(s) + q_factor.log_eval(s);
        return {abscissa, cap(v), TailMethod::prop42_stirling};
    }
    const double v = std::log(t) - t * std::log(t) + log_gamma(s) + q_factor.log_eval(s);
    return {abscissa, cap(v), TailMethod::prop42_general};
}

}  // namespace tailmoment
