#pragma once

#include <functional>
#include <optional>
#include <string_view>

#include "tailmoment/envelope.hpp"

namespace tailmoment {

enum class TailMethod { paper_p_eq_t, stirling_form, prop21_L, prop42_general, prop42_stirling, optimized };

std::string_view to_string(TailMethod method);

/// Upper bound on ln P(xi >= t), capped at 0.
struct TailBound {
    double t = 0.0;
    double log_value = 0.0;
    TailMethod method = TailMethod::optimized;
    std::optional<double> optimizer_p{};
    /// optimized only: the minimiser sits at p_max, so a wider domain may do better.
    bool domain_too_small = false;
};

/// inf over p in the domain of ln m_p - p ln t, capped at 0.
///
/// A 64-point geometric scan brackets the minimum, golden-section search then
/// refines it to 1e-6 relative in p. The objective is convex in p for
/// log-convex moments, which the scan makes non-essential.
TailBound tail_chebyshev_optimized(const MomentEnvelope& m, double t);

/// Markov at p = t with m_p = p Gamma(p + beta): ln(t^{-t} Gamma(t + beta + 1)).
TailBound tail_paper_p_eq_t(double beta, double t);

/// ln(c2 (t + beta)^{beta + 1/2} e^{-t}).
TailBound tail_stirling_form(double beta, double t);

/// ln(t^beta e^{-t} L(t)) for moments bounded by (p+beta)^{p+beta} e^{-(p+beta)} L(p+beta).
TailBound tail_prop21(double beta, const SlowVaryFactor& l_factor, double t);
/// Same with L given as ln L(s).
TailBound tail_prop21(double beta, const std::function<double(double)>& log_l, double t);

/// L(s) = K sqrt(s) Q(s) with the smallest K such that m_{s-beta} <= s^s e^{-s} L(s)
/// at every s in s_values. The sqrt(s) carries the Stirling gap between p Gamma(p+beta)
/// and (p+beta)^{p+beta} e^{-(p+beta)}.
struct Prop21Fit {
    double log_k = 0.0;
    std::function<double(double)> log_l;
};

Prop21Fit fit_prop21_factor(const MomentEnvelope& m, double beta, const SlowVaryFactor& q_factor,
                            const Eigen::ArrayXd& s_values);

/// Bound on P(xi >= t^{1/gamma}) from E xi^q <= (q/gamma) Gamma((q+theta)/gamma) Q((q+theta)/gamma).
///
/// Exact form: t^{1-t} Gamma(t + theta/gamma) Q(t + theta/gamma).
/// Stirling form: c2 t^{1/2} e^{-t} (t + theta/gamma)^{theta/gamma} Q(t + theta/gamma).
/// The returned TailBound::t is the abscissa t^{1/gamma}.
TailBound tail_prop42(double theta, double gamma_exp, const SlowVaryFactor& q_factor, double t, bool use_stirling);

}  // namespace tailmoment
