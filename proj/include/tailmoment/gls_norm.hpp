#pragma once

#include "tailmoment/envelope.hpp"

namespace tailmoment {

/// psi_beta(p) = p^{1/p} Gamma(p + beta)^{1/p}, p >= 1.
class PsiFunction {
public:
    explicit PsiFunction(double beta);

    double beta() const { return beta_; }
    double log_eval(double p) const;
    double operator()(double p) const;

private:
    double beta_;
};

double psi_eval(double beta, double p);

struct GlsNormResult {
    double norm = 0.0;
    double argmax_p = 1.0;
    /// The supremum was found at p_max; the true sup over p >= 1 may be larger.
    bool argmax_at_boundary = false;
};

/// sup over p in [1, p_max] of ||xi||_p / psi(p), with ||xi||_p = m_p^{1/p}.
///
/// 128-point geometric scan, then golden-section refinement between the
/// neighbours of the best scan point. m must cover [1, p_max]; p_max >= 10.
GlsNormResult gls_norm(const MomentEnvelope& m, const PsiFunction& psi, double p_max = 200.0);

}  // namespace tailmoment
