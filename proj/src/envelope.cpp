#include "tailmoment/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include "tailmoment/errors.hpp"
#include "tailmoment/grid.hpp"
#include "tailmoment/special_functions.hpp"

namespace tailmoment {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw DomainError(std::string(what) + " must be finite");
}

}  // namespace

void SlowVaryFactor::validate() const {
    require_finite(scale, "slow factor scale c");
    require_finite(log_power, "slow factor exponent a");
    require_finite(exp_coeff, "slow factor coefficient b");
    require_finite(exp_power, "slow factor exponent d");
    require_finite(arg_power, "slow factor argument power");
    if (scale <= 0.0) throw DomainError("slow factor scale c must be positive");
    if (exp_power < 0.0 || exp_power >= 1.0) throw DomainError("slow factor exponent d must lie in [0, 1)");
    if (arg_power <= 0.0) throw DomainError("slow factor argument power must be positive");
}

double SlowVaryFactor::log_eval(double t) const {
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("slow factor: t must be finite and >= 0");
    const double u = arg_power == 1.0 ? t : std::pow(t, arg_power);
    const double l = std::log(std::numbers::e + u);
    double out = std::log(scale);
    if (log_power != 0.0) out += log_power * std::log(l);
    if (exp_coeff != 0.0) out += exp_coeff * (exp_power == 0.0 ? 1.0 : std::pow(l, exp_power));
    return out;
}

double SlowVaryFactor::operator()(double t) const { return std::exp(log_eval(t)); }

SlowVaryFactor SlowVaryFactor::composed_with_power(double s) const {
    if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("composed_with_power: s must be positive");
    SlowVaryFactor out = *this;
    out.arg_power *= s;
    return out;
}

TailEnvelope TailEnvelope::gamma_type(double beta) {
    TailEnvelope env;
    env.theta = beta;
    return env;
}

TailEnvelope TailEnvelope::weibull(double gamma_exp, double rate) {
    TailEnvelope env;
    env.gamma_exp = gamma_exp;
    env.rate = rate;
    return env;
}

void TailEnvelope::validate() const {
    require_finite(theta, "theta");
    require_finite(gamma_exp, "gamma");
    require_finite(rate, "C");
    require_finite(t0, "t0");
    if (theta <= -1.0) throw DomainError("theta must exceed -1");
    if (gamma_exp <= 0.0) throw DomainError("gamma must be positive");
    if (rate <= 0.0) throw DomainError("C must be positive");
    if (t0 <= 0.0) throw DomainError("t0 must be positive");
    q.validate();
}

double TailEnvelope::log_uncapped(double t) const {
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("envelope: t must be finite and >= 0");
    double power_term = 0.0;
    if (theta != 0.0) {
        if (t == 0.0) {
            power_term = theta > 0.0 ? -kInf : kInf;
        } else {
            power_term = theta * std::log(t);
        }
    }
    const double decay = rate * (gamma_exp == 1.0 ? t : std::pow(t, gamma_exp));
    return power_term - decay + q.log_eval(t);
}

double TailEnvelope::log_eval(double t) const { return std::min(0.0, log_uncapped(t)); }

double TailEnvelope::moment_integrand_mode(double p) const {
    const double k = p - 1.0 + theta;
    if (k <= 0.0) return 0.0;
    return std::pow(k / (rate * gamma_exp), 1.0 / gamma_exp);
}

double TailEnvelope::length_scale() const { return std::pow(1.0 / rate, 1.0 / gamma_exp); }

double envelope_log_eval(const TailEnvelope& env, double t) { return env.log_eval(t); }

TailEnvelope power_transform(const TailEnvelope& env) {
    env.validate();
    const double g = env.gamma_exp;
    TailEnvelope out = env;
    out.theta = env.theta / g;
    out.gamma_exp = 1.0;
    out.t0 = std::pow(env.t0, g);
    out.q = env.q.composed_with_power(1.0 / g);
    return out;
}

SlowVariationReport check_slow_variation(const SlowVaryFactor& f, const Eigen::ArrayXd& z_grid,
                                         const Eigen::ArrayXd& v_grid) {
    f.validate();
    if (z_grid.size() == 0 || v_grid.size() == 0) throw DomainError("check_slow_variation: empty grid");
    if ((z_grid < std::numbers::e).any()) throw DomainError("check_slow_variation: z must be >= e");
    if ((v_grid <= 0.0).any()) throw DomainError("check_slow_variation: v must be positive");

    constexpr double kMinAbsM = 1e-6;
    SlowVariationReport report;
    report.deviation_by_z.reserve(static_cast<std::size_t>(z_grid.size()));
    report.sup_ratio = -kInf;
    bool any_valid = false;

    for (double z : z_grid) {
        const double mz = f.log_eval(z);
        if (std::abs(mz) < kMinAbsM) {
            report.indeterminate = true;
            ++report.skipped;
            report.deviation_by_z.push_back(std::numeric_limits<double>::quiet_NaN());
            continue;
        }
        any_valid = true;
        double worst = 0.0;
        for (double v : v_grid) {
            const double ratio = f.log_eval(z * v) / mz;
            worst = std::max(worst, std::abs(ratio - 1.0));
            if (v >= 1.0) report.sup_ratio = std::max(report.sup_ratio, ratio);
        }
        report.deviation_by_z.push_back(worst);
        report.max_deviation = std::max(report.max_deviation, worst);
    }
    if (!any_valid) {
        report.max_deviation = std::numeric_limits<double>::quiet_NaN();
        report.sup_ratio = std::numeric_limits<double>::quiet_NaN();
    }
    return report;
}

bool passes_slow_variation(const SlowVaryFactor& f) {
    if (f.is_constant()) return true;
    const Eigen::ArrayXd z = geometric_grid(std::numbers::e, 1e12, 24);
    Eigen::ArrayXd v(4);
    v << 0.5, 2.0, 10.0, 100.0;
    const SlowVariationReport r = check_slow_variation(f, z, v);

    double first = std::numeric_limits<double>::quiet_NaN();
    double last = first;
    for (double d : r.deviation_by_z) {
        if (std::isnan(d)) continue;
        if (std::isnan(first)) first = d;
        last = d;
    }
    if (std::isnan(first)) return false;
    return last <= first && r.sup_ratio < 100.0;
}

MomentEnvelope::MomentEnvelope(LogMoment log_moment, double p_min, double p_max, std::string source)
    : log_moment_(std::move(log_moment)), p_min_(p_min), p_max_(p_max), source_(std::move(source)) {
    if (!log_moment_) throw DomainError("MomentEnvelope: empty callable");
    if (!(p_min > 0.0) || !(p_max >= p_min) || !std::isfinite(p_max)) {
        throw DomainError("MomentEnvelope: need 0 < p_min <= p_max < inf");
    }
}

double MomentEnvelope::log_moment(double p) const {
    if (!(p >= p_min_) || !(p <= p_max_)) {
        throw DomainError("MomentEnvelope(" + source_ + "): p = " + std::to_string(p) + " outside [" +
                          std::to_string(p_min_) + ", " + std::to_string(p_max_) + "]");
    }
    return log_moment_(p);
}

MomentEnvelope MomentEnvelope::scaled(double a) const {
    if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("MomentEnvelope::scaled: a must be positive");
    const double log_a = std::log(a);
    return MomentEnvelope([inner = log_moment_, log_a](double p) { return inner(p) + p * log_a; }, p_min_,
                          p_max_, source_ + "*scaled");
}

MomentEnvelope MomentEnvelope::with_domain(double p_min, double p_max) const {
    return MomentEnvelope(log_moment_, p_min, p_max, source_);
}

MomentEnvelope MomentEnvelope::gamma_bound(double beta, double p_min, double p_max) {
    if (p_min + beta <= 0.0) throw DomainError("gamma_bound: p + beta must be positive on the domain");
    return MomentEnvelope([beta](double p) { return std::log(p) + log_gamma(p + beta); }, p_min, p_max,
                          "p*Gamma(p+beta)");
}

MomentEnvelope MomentEnvelope::exponential(double p_min, double p_max) {
    return MomentEnvelope([](double p) { return log_gamma(p + 1.0); }, p_min, p_max, "Gamma(p+1)");
}

double min_second_difference(const MomentEnvelope& m, double lo, double hi, Eigen::Index count) {
    if (count < 3) throw DomainError("min_second_difference: need at least 3 points");
    const Eigen::ArrayXd grid = linear_grid(lo, hi, count);
    Eigen::ArrayXd values(count);
    for (Eigen::Index i = 0; i < count; ++i) values(i) = m.log_moment(grid(i));
    const Eigen::ArrayXd second = values.segment(2, count - 2) - 2.0 * values.segment(1, count - 2) +
                                  values.segment(0, count - 2);
    return second.minCoeff();
}

}  // namespace tailmoment
