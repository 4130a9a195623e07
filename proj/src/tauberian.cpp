#include "tailmoment/tauberian.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include <Eigen/QR>

#include "tailmoment/errors.hpp"
#include "tailmoment/grid.hpp"

namespace tailmoment {

namespace {

constexpr Eigen::Index kMinGrid = 8;

void require_grid(const Eigen::ArrayXd& grid) {
    if (grid.size() < kMinGrid) throw DomainError("tauberian: degenerate grid, need at least 8 points");
    if (!(grid > 0.0).all() || !grid.allFinite()) throw DomainError("tauberian: grid points must be positive");
}

}  // namespace

Eigen::ArrayXd default_tauberian_grid() { return geometric_grid(16.0, 16384.0, 12); }

LimitDiagnostic fit_limit(Eigen::ArrayXd grid, Eigen::ArrayXd ratios) {
    require_grid(grid);
    if (ratios.size() != grid.size()) throw DomainError("fit_limit: grid and ratios differ in length");
    if (!ratios.allFinite() || !(ratios > 0.0).all()) throw DomainError("fit_limit: ratios must be finite and positive");

    const Eigen::Index n = grid.size();
    const Eigen::Index start = n / 2;
    const Eigen::Index m = n - start;
    const Eigen::ArrayXd x = grid.tail(m);
    Eigen::MatrixXd design(m, 2);
    design.col(0).setOnes();
    design.col(1) = (x.log() / x).matrix();
    const Eigen::VectorXd rhs = ratios.tail(m).matrix();
    const Eigen::Vector2d coeffs = design.colPivHouseholderQr().solve(rhs);
    const Eigen::VectorXd resid = rhs - design * coeffs;

    LimitDiagnostic out;
    out.grid = std::move(grid);
    out.ratios = std::move(ratios);
    out.limit_estimate = coeffs(0);
    out.log_coefficient = coeffs(1);
    out.residual = std::sqrt(resid.squaredNorm() / double(m));
    return out;
}

LimitDiagnostic tail_ratio_sequence(const std::function<double(double)>& log_tail, const Eigen::ArrayXd& t_grid) {
    require_grid(t_grid);
    Eigen::ArrayXd ratios(t_grid.size());
    for (Eigen::Index i = 0; i < t_grid.size(); ++i) {
        const double lt = log_tail(t_grid(i));
        if (!(lt < 0.0)) throw DomainError("tail_ratio_sequence: tail must be below 1 on the grid");
        ratios(i) = std::abs(lt) / t_grid(i);
    }
    return fit_limit(t_grid, std::move(ratios));
}

LimitDiagnostic moment_ratio_sequence(const MomentEnvelope& m, const Eigen::ArrayXd& p_grid) {
    require_grid(p_grid);
    Eigen::ArrayXd ratios(p_grid.size());
    for (Eigen::Index i = 0; i < p_grid.size(); ++i) {
        const double p = p_grid(i);
        // exp(ln m_p / p) * e / p, in log space
        ratios(i) = std::exp(m.log_moment(p) / p + 1.0 - std::log(p));
    }
    return fit_limit(p_grid, std::move(ratios));
}

DualityReport duality_check(const OracleDistribution& oracle, const Eigen::ArrayXd& t_grid,
                            const Eigen::ArrayXd& p_grid, double base_tolerance) {
    DualityReport report;
    report.tail = tail_ratio_sequence([&oracle](double t) { return oracle.log_tail(t); }, t_grid);
    report.moment = moment_ratio_sequence(oracle.moments(p_grid.minCoeff(), p_grid.maxCoeff()), p_grid);
    report.discrepancy = std::abs(report.tail.limit_estimate - report.moment.limit_estimate);
    report.tolerance = base_tolerance + report.tail.residual + report.moment.residual;
    report.tail_unit = std::abs(report.tail.limit_estimate - 1.0) <= report.tolerance;
    report.moment_unit = std::abs(report.moment.limit_estimate - 1.0) <= report.tolerance;
    report.passed = report.discrepancy <= report.tolerance;
    return report;
}

}  // namespace tailmoment
