#pragma once

#include <string_view>

#include "tailmoment/envelope.hpp"

namespace tailmoment {

enum class MomentMethod { closed_beta, closed_general, closed_slowvary, quadrature, lower_quadrature };

std::string_view to_string(MomentMethod method);

/// A bound on ln E xi^p together with the formula that produced it.
struct MomentBound {
    double p = 1.0;
    double log_value = 0.0;
    MomentMethod method = MomentMethod::quadrature;
    /// beta for the gamma-type forms, theta for the general one.
    double beta_or_theta = 0.0;
    double gamma_exp = 1.0;
    /// quadrature only
    double rel_error = 0.0;
    /// closed_slowvary only: false when the L factor failed the slow-variation check
    bool slow_variation_ok = true;
};

/// ln(p Gamma(p + beta)).
MomentBound moment_upper_beta(double beta, double p);

/// ln((q/gamma) Gamma((q+theta)/gamma) Q((q+theta)/gamma)).
MomentBound moment_upper_general(double q, double theta, double gamma_exp, const SlowVaryFactor& q_factor);

/// ln(calib p Gamma(p+beta) L(p+beta-1)).
///
/// calib is the multiplicative constant the slowly-varying moment bound leaves
/// unspecified; callers supply one that they have certified (e.g. by quadrature).
MomentBound moment_upper_slowvary(double p, double beta, const SlowVaryFactor& l_factor, double calib);

inline constexpr double kDefaultRelTol = 1e-9;

/// ln(p int_0^inf t^{p-1} env(t) dt) by adaptive quadrature; rel_tol in [1e-12, 1e-2].
MomentBound moment_quadrature(const TailEnvelope& env, double p, double rel_tol = kDefaultRelTol);

struct LowerMomentBound {
    MomentBound bound;
    /// exp(bound) / (p Gamma(p + theta)): the constant realised by this envelope and t_lo.
    double empirical_constant = 0.0;
    /// t_lo < env.t0: the dominance hypothesis is only asserted above t0.
    bool below_t0 = false;
};

/// ln(p int_{t_lo}^inf t^{p-1} env(t) dt): a lower bound on E xi^p whenever the
/// true tail dominates env on [t_lo, inf).
LowerMomentBound moment_lower_quadrature(const TailEnvelope& env, double p, double t_lo,
                                         double rel_tol = kDefaultRelTol);

/// Quadrature moments of env as a MomentEnvelope on [p_min, p_max].
MomentEnvelope quadrature_moments(const TailEnvelope& env, double p_min, double p_max,
                                  double rel_tol = kDefaultRelTol);

}  // namespace tailmoment
