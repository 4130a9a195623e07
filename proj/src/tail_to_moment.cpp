#include "tailmoment/tail_to_moment.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tailmoment/errors.hpp"
#include "tailmoment/quadrature.hpp"
#include "tailmoment/special_functions.hpp"

namespace tailmoment {

namespace {

void require_p(double p, const char* op) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError(std::string(op) + ": p must be finite and >= 1");
}

void require_rel_tol(double rel_tol) {
    if (!(rel_tol >= 1e-12 && rel_tol <= 1e-2)) throw DomainError("rel_tol must lie in [1e-12, 1e-2]");
}

}  // namespace

std::string_view to_string(MomentMethod method) {
    switch (method) {
        case MomentMethod::closed_beta: return "closed_beta";
        case MomentMethod::closed_general: return "closed_general";
        case MomentMethod::closed_slowvary: return "closed_slowvary";
        case MomentMethod::quadrature: return "quadrature";
        case MomentMethod::lower_quadrature: return "lower_quadrature";
    }
    return "unknown";
}

MomentBound moment_upper_beta(double beta, double p) {
    require_p(p, "moment_upper_beta");
    if (!(p + beta > 0.0)) throw DomainError("moment_upper_beta: p + beta must be positive");
    return {p, std::log(p) + log_gamma(p + beta), MomentMethod::closed_beta, beta};
}

MomentBound moment_upper_general(double q, double theta, double gamma_exp, const SlowVaryFactor& q_factor) {
    require_p(q, "moment_upper_general");
    if (!(gamma_exp > 0.0)) throw DomainError("moment_upper_general: gamma must be positive");
    q_factor.validate();
    const double s = (q + theta) / gamma_exp;
    if (!(s > 0.0)) throw DomainError("moment_upper_general: (q + theta)/gamma must be positive");
    const double log_value = std::log(q / gamma_exp) + log_gamma(s) + q_factor.log_eval(s);
    return {q, log_value, MomentMethod::closed_general, theta, gamma_exp};
}

MomentBound moment_upper_slowvary(double p, double beta, const SlowVaryFactor& l_factor, double calib) {
    require_p(p, "moment_upper_slowvary");
    if (!(calib > 0.0) || !std::isfinite(calib)) throw DomainError("moment_upper_slowvary: calib must be positive");
    if (!(p + beta > 0.0)) throw DomainError("moment_upper_slowvary: p + beta must be positive");
    l_factor.validate();
    // L is evaluated at z = p + beta - 1, which can dip below 0 for beta < 0; the family is defined on t >= 0.
    const double z = std::max(0.0, p + beta - 1.0);
    MomentBound bound{p, std::log(calib) + std::log(p) + log_gamma(p + beta) + l_factor.log_eval(z),
                      MomentMethod::closed_slowvary, beta};
    bound.slow_variation_ok = passes_slow_variation(l_factor);
    return bound;
}

MomentBound moment_quadrature(const TailEnvelope& env, double p, double rel_tol) {
    require_p(p, "moment_quadrature");
    require_rel_tol(rel_tol);
    env.validate();
    const IntegralResult r = key_relation_log_moment([&env](double t) { return env.log_eval(t); }, p, 0.0,
                                                     env.moment_integrand_mode(p), env.length_scale(), rel_tol);
    MomentBound bound{p, r.log_value, MomentMethod::quadrature, env.theta, env.gamma_exp};
    bound.rel_error = r.rel_error;
    return bound;
}

LowerMomentBound moment_lower_quadrature(const TailEnvelope& env, double p, double t_lo, double rel_tol) {
    require_p(p, "moment_lower_quadrature");
    require_rel_tol(rel_tol);
    env.validate();
    if (!(t_lo >= 0.0) || !std::isfinite(t_lo)) throw DomainError("moment_lower_quadrature: t_lo must be >= 0");
    const IntegralResult r = key_relation_log_moment([&env](double t) { return env.log_eval(t); }, p, t_lo,
                                                     env.moment_integrand_mode(p), env.length_scale(), rel_tol);
    LowerMomentBound out;
    out.bound = {p, r.log_value, MomentMethod::lower_quadrature, env.theta, env.gamma_exp, r.rel_error};
    if (p + env.theta > 0.0) {
        out.empirical_constant = std::exp(r.log_value - std::log(p) - log_gamma(p + env.theta));
    }
    out.below_t0 = t_lo < env.t0;
    return out;
}

MomentEnvelope quadrature_moments(const TailEnvelope& env, double p_min, double p_max, double rel_tol) {
    env.validate();
    require_rel_tol(rel_tol);
    return MomentEnvelope([env, rel_tol](double p) { return moment_quadrature(env, p, rel_tol).log_value; },
                          p_min, p_max, "quadrature");
}

}  // namespace tailmoment
