#include "tailmoment/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>
#include <utility>

#include "tailmoment/errors.hpp"
#include "tailmoment/grid.hpp"
#include "tailmoment/quadrature.hpp"
#include "tailmoment/special_functions.hpp"

namespace tailmoment {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_number(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

// Neumaier compensated summation.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// argmax of g on (0, hi], coarse geometric scan then golden refinement
double maximise_log(const std::function<double(double)>& g, double hi) {
    const Eigen::ArrayXd grid = geometric_grid(1e-8, hi, 400);
    Eigen::Index best_i = 0;
    double best = -kInf;
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        const double v = g(grid(i));
        if (v > best) {
            best = v;
            best_i = i;
        }
    }
    if (best_i == 0) return 0.0;
    double lo = grid(best_i - 1);
    double up = grid(std::min<Eigen::Index>(best_i + 1, grid.size() - 1));
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = up - inv_phi * (up - lo);
    double x2 = lo + inv_phi * (up - lo);
    double f1 = g(x1);
    double f2 = g(x2);
    while (up - lo > 1e-12 * up) {
        if (f1 >= f2) {
            up = x2;
            x2 = x1;
            f2 = f1;
            x1 = up - inv_phi * (up - lo);
            f1 = g(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (up - lo);
            f2 = g(x2);
        }
    }
    return 0.5 * (lo + up);
}

}  // namespace

OracleDistribution::OracleDistribution(std::string name, LogFn log_tail, std::optional<LogFn> exact_log_moment,
                                       LogFn mode_hint, double scale)
    : name_(std::move(name)),
      log_tail_(std::move(log_tail)),
      exact_log_moment_(std::move(exact_log_moment)),
      mode_hint_(std::move(mode_hint)),
      scale_(scale) {
    if (!log_tail_ || !mode_hint_) throw DomainError("OracleDistribution: empty callable");
    if (!(scale_ > 0.0)) throw DomainError("OracleDistribution: scale must be positive");
}

OracleDistribution OracleDistribution::exponential(double rate) {
    if (!(rate > 0.0) || !std::isfinite(rate)) throw DomainError("exponential oracle: rate must be positive");
    const std::string name = rate == 1.0 ? "exp1" : "exp(rate=" + format_number(rate) + ")";
    return OracleDistribution(
        name, [rate](double t) { return -rate * t; },
        [rate](double p) { return log_gamma(p + 1.0) - p * std::log(rate); },
        [rate](double p) { return std::max(0.0, (p - 1.0) / rate); }, 1.0 / rate);
}

OracleDistribution OracleDistribution::gamma_shape(int k) {
    if (k < 1) throw DomainError("gamma oracle: shape must be a positive integer");
    std::vector<double> log_fact(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) log_fact[std::size_t(j)] = log_gamma(j + 1.0);
    auto log_tail = [log_fact](double t) {
        // ln sum_{j<k} t^j / j!, log-sum-exp over terms
        if (t == 0.0) return 0.0;
        const double lt = std::log(t);
        const std::size_t k = log_fact.size();
        double peak = -kInf;
        for (std::size_t j = 0; j < k; ++j) peak = std::max(peak, double(j) * lt - log_fact[j]);
        double s = 0.0;
        for (std::size_t j = 0; j < k; ++j) s += std::exp(double(j) * lt - log_fact[j] - peak);
        return -t + peak + std::log(s);
    };
    const double log_gamma_k = log_gamma(double(k));
    return OracleDistribution(
        "gamma" + std::to_string(k), log_tail,
        [k, log_gamma_k](double p) { return log_gamma(p + k) - log_gamma_k; },
        [k](double p) { return std::max(0.0, p + k - 2.0); }, 1.0);
}

OracleDistribution OracleDistribution::weibull(double gamma_exp) {
    if (!(gamma_exp > 0.0) || !std::isfinite(gamma_exp)) throw DomainError("weibull oracle: gamma must be positive");
    const std::string name = "weibull" + format_number(gamma_exp);
    return OracleDistribution(
        name, [gamma_exp](double t) { return -std::pow(t, gamma_exp); },
        [gamma_exp](double p) { return log_gamma(1.0 + p / gamma_exp); },
        [gamma_exp](double p) { return p > 1.0 ? std::pow((p - 1.0) / gamma_exp, 1.0 / gamma_exp) : 0.0; }, 1.0);
}

OracleDistribution OracleDistribution::from_envelope(const TailEnvelope& env) {
    env.validate();
    const double peak = maximise_log([&env](double t) { return env.log_uncapped(t); },
                                     std::max(1e4, 100.0 * env.length_scale()));
    // the numeric peak may sit a few ulps off the true one; clamp so T never rises
    const double at_peak = env.log_eval(peak);
    auto log_tail = [env, peak, at_peak](double t) {
        if (t <= 0.0) return 0.0;
        return t <= peak ? at_peak : std::min(at_peak, env.log_eval(t));
    };
    auto mode = [env, peak](double p) { return std::max(peak, env.moment_integrand_mode(p)); };
    std::ostringstream name;
    name << "envelope(theta=" << env.theta << ",gamma=" << env.gamma_exp << ",C=" << env.rate << ")";
    return OracleDistribution(name.str(), log_tail, std::nullopt, mode, env.length_scale());
}

OracleDistribution OracleDistribution::power_transformed(double g) const {
    if (!(g > 0.0) || !std::isfinite(g)) throw DomainError("power_transformed: gamma must be positive");
    std::optional<LogFn> moment;
    if (exact_log_moment_) {
        moment = [inner = *exact_log_moment_, g](double p) { return inner(g * p); };
    }
    return OracleDistribution(
        name_ + "^" + format_number(g),
        [inner = log_tail_, g](double t) { return t <= 0.0 ? 0.0 : inner(std::pow(t, 1.0 / g)); }, moment,
        [inner = mode_hint_, g](double p) { return std::pow(inner(g * p), g); }, std::pow(scale_, g));
}

double OracleDistribution::log_tail(double t) const {
    if (std::isnan(t)) throw DomainError("log_tail: NaN argument");
    if (t <= 0.0) return 0.0;
    return std::min(0.0, log_tail_(t));
}

double OracleDistribution::log_moment(double p, double rel_tol) const {
    if (exact_log_moment_) {
        if (!(p > 0.0)) throw DomainError("log_moment: p must be positive");
        return (*exact_log_moment_)(p);
    }
    return log_moment_quadrature(p, rel_tol);
}

double OracleDistribution::log_moment_quadrature(double p, double rel_tol) const {
    return key_relation_log_moment([this](double t) { return log_tail(t); }, p, 0.0, mode_hint_(p), scale_, rel_tol)
        .log_value;
}

MomentEnvelope OracleDistribution::moments(double p_min, double p_max, double rel_tol) const {
    return MomentEnvelope([self = *this, rel_tol](double p) { return self.log_moment(p, rel_tol); }, p_min, p_max,
                          name_ + (exact_log_moment_ ? ":exact" : ":quadrature"));
}

OracleDistribution oracle_by_name(std::string_view name) {
    if (name == "exp1") return OracleDistribution::exponential(1.0);
    if (name == "gamma3") return OracleDistribution::gamma_shape(3);
    if (name == "weibull2") return OracleDistribution::weibull(2.0);
    throw ConfigError("unknown oracle '" + std::string(name) + "' (expected exp1, gamma3 or weibull2)");
}

const std::vector<std::string>& oracle_names() {
    static const std::vector<std::string> names{"exp1", "gamma3", "weibull2"};
    return names;
}

double quantile(const OracleDistribution& d, double u) {
    if (!(u > 0.0 && u <= 1.0)) throw DomainError("quantile: u must lie in (0, 1]");
    if (u == 1.0) return 0.0;
    const double target = std::log(u);
    constexpr double kCeiling = 1e6;
    constexpr double kLogTol = 1e-12;

    double lo = 0.0;
    double hi = 1.0;
    while (d.log_tail(hi) > target) {
        lo = hi;
        hi *= 2.0;
        if (hi > kCeiling) {
            if (d.log_tail(kCeiling) > target) {
                throw BracketError("quantile: tail stays above u up to the search ceiling");
            }
            hi = kCeiling;
            break;
        }
    }
    double mid = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200; ++iter) {
        mid = 0.5 * (lo + hi);
        const double v = d.log_tail(mid);
        if (std::abs(v - target) <= kLogTol) break;
        if (v > target) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (!(hi - lo > 2.0 * std::numeric_limits<double>::epsilon() * hi)) break;
    }
    return mid;
}

SampleBatch sample(const OracleDistribution& d, std::size_t n, std::uint64_t seed) {
    if (n < 1) throw DomainError("sample: n must be >= 1");
    SampleBatch batch{d.name(), seed, std::vector<double>(n)};
    const std::size_t shards = (n + kSampleShardSize - 1) / kSampleShardSize;

    auto run_shard = [&](std::size_t k) {
        std::mt19937_64 gen(seed + k);
        const std::size_t begin = k * kSampleShardSize;
        const std::size_t end = std::min(n, begin + kSampleShardSize);
        for (std::size_t i = begin; i < end; ++i) {
            const double u = static_cast<double>((gen() >> 11) + 1) * 0x1.0p-53;
            batch.values[i] = quantile(d, u);
        }
    };

    const std::size_t workers =
        std::min<std::size_t>(shards, std::max(1u, std::thread::hardware_concurrency()));
    if (workers <= 1) {
        for (std::size_t k = 0; k < shards; ++k) run_shard(k);
        return batch;
    }
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t k = w; k < shards; k += workers) run_shard(k);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return batch;
}

MomentEstimate empirical_moment(const SampleBatch& batch, double p) {
    if (batch.values.empty()) throw DomainError("empirical_moment: empty batch");
    if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("empirical_moment: p must be >= 1");
    auto power = [p](double v) { return v == 0.0 ? 0.0 : std::pow(v, p); };

    CompensatedSum sum;
    for (double v : batch.values) sum.add(power(v));
    const double n = static_cast<double>(batch.values.size());
    const double mean = sum.value() / n;
    if (batch.values.size() == 1) return {mean, 0.0};

    CompensatedSum squares;
    for (double v : batch.values) {
        const double dev = power(v) - mean;
        squares.add(dev * dev);
    }
    const double variance = squares.value() / (n - 1.0);
    return {mean, std::sqrt(variance / n)};
}

void write_csv(std::ostream& out, const SampleBatch& batch) {
    out << "# name=" << batch.name << " seed=" << batch.seed << " n=" << batch.values.size() << '\n';
    out << "value\n";
    char buf[32];
    for (double v : batch.values) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << buf << '\n';
    }
}

}  // namespace tailmoment
