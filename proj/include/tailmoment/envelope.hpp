#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace tailmoment {

/// Slowly varying factor from the closed family
///
///     Q(t) = c * (ln(e + u))^a * exp(b * (ln(e + u))^d),   u = t^s,
///
/// with 0 <= d < 1. The inner exponent s is 1 for a freshly built factor;
/// power_transform composes t -> t^{1/gamma} into it, which keeps the
/// family closed without re-deriving (a, b, d). Using ln(e + u) rather
/// than ln u keeps the factor positive and finite at t = 0.
struct SlowVaryFactor {
    double scale = 1.0;      // c
    double log_power = 0.0;  // a
    double exp_coeff = 0.0;  // b
    double exp_power = 0.0;  // d
    double arg_power = 1.0;  // s

    static SlowVaryFactor constant(double c = 1.0) { return {c, 0.0, 0.0, 0.0, 1.0}; }
    static SlowVaryFactor log_power_of(double a, double c = 1.0) { return {c, a, 0.0, 0.0, 1.0}; }
    static SlowVaryFactor exp_log_power(double b, double d, double c = 1.0) { return {c, 0.0, b, d, 1.0}; }

    /// Throws DomainError on c <= 0, d outside [0, 1), s <= 0 or non-finite fields.
    void validate() const;

    /// ln Q(t), t >= 0.
    double log_eval(double t) const;
    double operator()(double t) const;

    /// True when Q does not depend on t.
    bool is_constant() const { return log_power == 0.0 && (exp_coeff == 0.0 || exp_power == 0.0); }

    /// t -> Q(t^s).
    SlowVaryFactor composed_with_power(double s) const;
};

/// Capped tail envelope min(1, t^theta exp(-C t^gamma) Q(t)).
///
/// t0 records where the uncapped bound is asserted to start; evaluation
/// itself applies the cap everywhere on [0, inf) and does not consult t0.
struct TailEnvelope {
    double theta = 0.0;
    double gamma_exp = 1.0;
    double rate = 1.0;  // C
    double t0 = 1.0;
    SlowVaryFactor q{};

    /// min(1, t^beta e^{-t}).
    static TailEnvelope gamma_type(double beta);
    /// min(1, e^{-C t^gamma}).
    static TailEnvelope weibull(double gamma_exp, double rate = 1.0);

    void validate() const;

    /// ln of t^theta exp(-C t^gamma) Q(t) without the cap.
    double log_uncapped(double t) const;
    /// ln min(1, ...).
    double log_eval(double t) const;

    /// Maximiser of t^{p-1} * uncapped envelope for constant Q; 0 when the product is decreasing.
    double moment_integrand_mode(double p) const;
    /// Natural length scale (1/C)^{1/gamma}.
    double length_scale() const;

    /// theta < 0 is accepted but is outside the theta >= 0 setting of the power-law generalization.
    bool negative_theta() const { return theta < 0.0; }
};

double envelope_log_eval(const TailEnvelope& env, double t);

/// Envelope of eta = xi^gamma: gamma -> 1, theta -> theta / gamma, Q -> Q(t^{1/gamma}).
TailEnvelope power_transform(const TailEnvelope& env);

struct SlowVariationReport {
    /// max over the grid of |M(zv)/M(z) - 1|
    double max_deviation = 0.0;
    /// sup of M(zv)/M(z) over v >= 1
    double sup_ratio = 0.0;
    /// max deviation per z (NaN where M(z) was too close to 0)
    std::vector<double> deviation_by_z;
    bool indeterminate = false;
    std::size_t skipped = 0;
};

/// Checks M = ln Q for slow variation on a (z, v) grid. z >= e, v > 0.
SlowVariationReport check_slow_variation(const SlowVaryFactor& f, const Eigen::ArrayXd& z_grid,
                                         const Eigen::ArrayXd& v_grid);

/// Runs check_slow_variation on a fixed default grid (z = e .. 1e12, v in {1/2, 2, 10, 100}).
/// Constant factors pass. Otherwise the per-z deviation at the top of the grid must not
/// exceed the one at the bottom, and the v >= 1 ratio must stay below 100.
bool passes_slow_variation(const SlowVaryFactor& f);

/// Moment upper-bound function p -> ln m_p on [p_min, p_max].
class MomentEnvelope {
public:
    using LogMoment = std::function<double(double)>;

    MomentEnvelope(LogMoment log_moment, double p_min, double p_max, std::string source);

    /// ln m_p; DomainError outside [p_min, p_max].
    double log_moment(double p) const;
    double operator()(double p) const { return log_moment(p); }

    double p_min() const { return p_min_; }
    double p_max() const { return p_max_; }
    const std::string& source() const { return source_; }

    /// a^p m_p.
    MomentEnvelope scaled(double a) const;
    MomentEnvelope with_domain(double p_min, double p_max) const;

    /// p * Gamma(p + beta).
    static MomentEnvelope gamma_bound(double beta, double p_min, double p_max);
    /// Gamma(p + 1), the Exp(1) moments.
    static MomentEnvelope exponential(double p_min, double p_max);

private:
    LogMoment log_moment_;
    double p_min_;
    double p_max_;
    std::string source_;
};

/// Smallest second difference of ln m_p on count uniform points in [lo, hi].
double min_second_difference(const MomentEnvelope& m, double lo, double hi, Eigen::Index count);

}  // namespace tailmoment
