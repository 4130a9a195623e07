#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tailmoment/envelope.hpp"

namespace tailmoment {

/// Non-negative distribution with an exactly known tail, used as ground truth.
class OracleDistribution {
public:
    using LogFn = std::function<double(double)>;

    /// mode_hint(p): where t^{p-1} T(t) peaks; scale: characteristic width of T.
    OracleDistribution(std::string name, LogFn log_tail, std::optional<LogFn> exact_log_moment, LogFn mode_hint,
                       double scale);

    /// Exp(rate): T(t) = e^{-rate t}.
    static OracleDistribution exponential(double rate = 1.0);
    /// Gamma(shape k, rate 1), integer k >= 1: T(t) = e^{-t} sum_{j<k} t^j / j!.
    static OracleDistribution gamma_shape(int k);
    /// Weibull: T(t) = e^{-t^gamma}.
    static OracleDistribution weibull(double gamma_exp);
    /// Envelope read as an equality, made nonincreasing: T(t) = min(1, f(max(t, t_peak))) where
    /// t_peak maximises f = t^theta e^{-C t^gamma} Q(t). Moments come from quadrature.
    static OracleDistribution from_envelope(const TailEnvelope& env);

    /// Law of xi^gamma.
    OracleDistribution power_transformed(double gamma_exp) const;

    const std::string& name() const { return name_; }
    /// ln P(xi >= t); 0 for t <= 0.
    double log_tail(double t) const;
    bool has_exact_moments() const { return exact_log_moment_.has_value(); }
    /// Exact ln E xi^p when known, otherwise quadrature of the tail.
    double log_moment(double p, double rel_tol = 1e-10) const;
    /// ln E xi^p through the tail integral, regardless of a closed form.
    double log_moment_quadrature(double p, double rel_tol = 1e-10) const;
    MomentEnvelope moments(double p_min, double p_max, double rel_tol = 1e-10) const;

private:
    std::string name_;
    LogFn log_tail_;
    std::optional<LogFn> exact_log_moment_;
    LogFn mode_hint_;
    double scale_;
};

/// exp1, gamma3 and weibull2; throws ConfigError otherwise.
OracleDistribution oracle_by_name(std::string_view name);
const std::vector<std::string>& oracle_names();

/// t with T(t) = u, to 1e-12 in ln u, by bracketing bisection. quantile(1) = 0.
double quantile(const OracleDistribution& d, double u);

struct SampleBatch {
    std::string name;
    std::uint64_t seed = 0;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
};

/// Values per shard; shard k uses std::mt19937_64 seeded with seed + k.
inline constexpr std::size_t kSampleShardSize = 1u << 16;

/// n inverse-transform samples. Uniforms are u = ((x >> 11) + 1) * 2^-53 in (0, 1],
/// x the raw mt19937_64 output. Shards run in parallel; the result does not depend
/// on the number of threads.
SampleBatch sample(const OracleDistribution& d, std::size_t n, std::uint64_t seed);

struct MomentEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
};

/// Sample mean of x^p with its CLT standard error, compensated sums.
MomentEstimate empirical_moment(const SampleBatch& batch, double p);

/// Single-column CSV: "# name=<name> seed=<seed> n=<n>", then "value", then one value per line.
void write_csv(std::ostream& out, const SampleBatch& batch);

}  // namespace tailmoment
