#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace tailmoment {

/// Integrand given by its logarithm: x -> ln f(x), f >= 0. -inf means f(x) = 0.
using LogIntegrand = std::function<double(double)>;

struct IntegralResult {
    double log_value = -std::numeric_limits<double>::infinity();
    /// Estimated relative error of exp(log_value).
    double rel_error = 0.0;
    std::size_t panels = 0;
};

struct QuadratureOptions {
    double rel_tol = 1e-9;
    std::size_t max_panels = 10000;
    /// Interior points where panels must start; the integrand's peak belongs here.
    std::vector<double> breakpoints{};
    /// Length scale s of the map t = c + s (1/u - 1) used on [c, inf). 0 picks max(1, |c|).
    double tail_scale = 0.0;
};

/// Adaptive Gauss-Kronrod (7/15) integration of a positive integrand held in log space.
///
/// Each panel is evaluated relative to its own largest node value and panels are
/// combined with log-sum-exp, so integrands like t^{p-1} e^{-t} at p in the
/// thousands neither overflow nor underflow. b may be +inf; the last segment is
/// then mapped onto u in (0, 1]. The panel with the largest error estimate is
/// bisected until the summed |K15 - G7| falls below rel_tol times the total.
///
/// Throws ConvergenceError (with the partial value) when max_panels is reached.
IntegralResult adaptive_integrate(const LogIntegrand& log_f, double a, double b,
                                  const QuadratureOptions& options = {});

/// ln of p * int_{lower}^inf t^{p-1} T(t) dt, T given by log_tail.
///
/// mode is where t^{p-1} T(t) peaks (or 0), scale a characteristic width of the
/// tail; both only steer panel placement.
IntegralResult key_relation_log_moment(const std::function<double(double)>& log_tail, double p, double lower,
                                       double mode, double scale, double rel_tol,
                                       std::size_t max_panels = 10000);

}  // namespace tailmoment
