#pragma once

#include <functional>

#include <Eigen/Core>

#include "tailmoment/envelope.hpp"
#include "tailmoment/oracle.hpp"

namespace tailmoment {

/// Ratio sequence r(x) along a grid and its fitted limit.
///
/// The limit is c0 in a least-squares fit r = c0 + c1 ln(x)/x over the upper
/// half of the grid; c1 ln(x)/x is the leading correction for t^beta e^{-t}
/// tails and for Gamma-type moments alike.
struct LimitDiagnostic {
    Eigen::ArrayXd grid;
    Eigen::ArrayXd ratios;
    double limit_estimate = 0.0;
    double log_coefficient = 0.0;  // c1
    double residual = 0.0;         // RMS of the fit residuals
};

/// 12 geometric points on [16, 16384].
Eigen::ArrayXd default_tauberian_grid();

/// c0 + c1 ln(x)/x least-squares fit on the upper half of (grid, ratios). At least 8 points.
LimitDiagnostic fit_limit(Eigen::ArrayXd grid, Eigen::ArrayXd ratios);

/// |ln T(t)| / t along t_grid. log_tail must be < 0 on the grid.
LimitDiagnostic tail_ratio_sequence(const std::function<double(double)>& log_tail, const Eigen::ArrayXd& t_grid);

/// ||xi||_p / (p/e) along p_grid.
LimitDiagnostic moment_ratio_sequence(const MomentEnvelope& m, const Eigen::ArrayXd& p_grid);

struct DualityReport {
    LimitDiagnostic tail;
    LimitDiagnostic moment;
    double discrepancy = 0.0;  // |tail limit - moment limit|
    double tolerance = 0.0;    // base tolerance plus both fit residuals
    bool tail_unit = false;    // tail limit within tolerance of 1
    bool moment_unit = false;
    bool passed = false;
};

/// Runs both sequences on an oracle. Passes when the two limits agree within
/// base_tolerance + the fit residuals; also records whether each limit is 1.
DualityReport duality_check(const OracleDistribution& oracle, const Eigen::ArrayXd& t_grid,
                            const Eigen::ArrayXd& p_grid, double base_tolerance = 5e-3);

}  // namespace tailmoment
