#include "tailmoment/gls_norm.hpp"

#include <algorithm>
#include <cmath>

#include "tailmoment/errors.hpp"
#include "tailmoment/grid.hpp"
#include "tailmoment/special_functions.hpp"

namespace tailmoment {

PsiFunction::PsiFunction(double beta) : beta_(beta) {
    if (!(beta > -1.0) || !std::isfinite(beta)) throw DomainError("PsiFunction: beta must exceed -1");
}

double PsiFunction::log_eval(double p) const {
    if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("psi: p must be >= 1");
    if (!(p + beta_ > 0.0)) throw DomainError("psi: p + beta must be positive");
    return (std::log(p) + log_gamma(p + beta_)) / p;
}

double PsiFunction::operator()(double p) const { return std::exp(log_eval(p)); }

double psi_eval(double beta, double p) { return PsiFunction(beta)(p); }

GlsNormResult gls_norm(const MomentEnvelope& m, const PsiFunction& psi, double p_max) {
    if (!(p_max >= 10.0) || !std::isfinite(p_max)) throw DomainError("gls_norm: p_max must be >= 10");
    if (m.p_min() > 1.0 || m.p_max() < p_max) throw DomainError("gls_norm: moments must cover [1, p_max]");

    // ln(||xi||_p / psi(p))
    auto log_ratio = [&](double p) { return m.log_moment(p) / p - psi.log_eval(p); };

    constexpr Eigen::Index kScan = 128;
    const Eigen::ArrayXd grid = geometric_grid(1.0, p_max, kScan);
    Eigen::ArrayXd values(kScan);
    for (Eigen::Index i = 0; i < kScan; ++i) values(i) = log_ratio(grid(i));

    Eigen::Index best_i = 0;
    double best = values.maxCoeff(&best_i);
    double best_p = grid(best_i);

    double lo = grid(std::max<Eigen::Index>(best_i - 1, 0));
    double hi = grid(std::min<Eigen::Index>(best_i + 1, kScan - 1));
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = log_ratio(x1);
    double f2 = log_ratio(x2);
    while (hi - lo > 1e-9 * hi) {
        if (f1 >= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = log_ratio(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = log_ratio(x2);
        }
    }
    if (f1 > best) {
        best = f1;
        best_p = x1;
    }
    if (f2 > best) {
        best = f2;
        best_p = x2;
    }

    return {std::exp(best), best_p, best_i == kScan - 1};
}

}  // namespace tailmoment
