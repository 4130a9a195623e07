#include "tailmoment/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <string>

#include "tailmoment/errors.hpp"

namespace tailmoment {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Kronrod 15-point abscissae (non-negative half) and weights; odd indices are the Gauss 7 nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double lo = 0.0;
    double hi = 0.0;
    bool mapped = false;
    // value and error are in units of exp(log_scale)
    double log_scale = -kInf;
    double value = 0.0;
    double error = 0.0;

    double log_error() const { return error > 0.0 ? log_scale + std::log(error) : -kInf; }
};

class Integrator {
public:
    Integrator(const LogIntegrand& log_f, double tail_start, double tail_scale)
        : log_f_(log_f), tail_start_(tail_start), tail_scale_(tail_scale), log_tail_scale_(std::log(tail_scale)) {}

    Panel evaluate(double lo, double hi, bool mapped) const {
        Panel panel{lo, hi, mapped};
        const double center = 0.5 * (lo + hi);
        const double half = 0.5 * (hi - lo);

        std::array<double, 15> lf{};
        lf[7] = at(center, mapped);
        for (std::size_t j = 0; j < 7; ++j) {
            lf[j] = at(center - half * kXgk[j], mapped);
            lf[14 - j] = at(center + half * kXgk[j], mapped);
        }
        double peak = -kInf;
        for (double v : lf) {
            if (std::isnan(v)) throw DomainError("adaptive_integrate: integrand returned NaN");
            if (v == kInf) throw DomainError("adaptive_integrate: integrand is infinite");
            peak = std::max(peak, v);
        }
        if (peak == -kInf) return panel;

        double kronrod = kWgk[7] * std::exp(lf[7] - peak);
        double gauss = kWg[3] * std::exp(lf[7] - peak);
        for (std::size_t j = 0; j < 7; ++j) {
            const double pair = std::exp(lf[j] - peak) + std::exp(lf[14 - j] - peak);
            kronrod += kWgk[j] * pair;
            if (j % 2 == 1) gauss += kWg[j / 2] * pair;
        }
        panel.log_scale = peak + std::log(half);
        panel.value = kronrod;
        panel.error = std::max(std::abs(kronrod - gauss), 50.0 * kEps * kronrod);
        return panel;
    }

private:
    double at(double x, bool mapped) const {
        if (!mapped) return log_f_(x);
        // u in (0, 1] -> t = c + s (1/u - 1), dt = s / u^2 du
        if (x <= 0.0) return -kInf;
        const double t = tail_start_ + tail_scale_ * (1.0 / x - 1.0);
        if (!std::isfinite(t)) return -kInf;
        const double v = log_f_(t);
        if (v == -kInf) return v;
        return v + log_tail_scale_ - 2.0 * std::log(x);
    }

    const LogIntegrand& log_f_;
    double tail_start_;
    double tail_scale_;
    double log_tail_scale_;
};

// Sum of value * exp(log_scale - ref) over panels, recomputed from scratch.
struct Totals {
    double ref = -kInf;
    double value = 0.0;
    double error = 0.0;
};

Totals sum_panels(const std::vector<Panel>& panels, const std::vector<bool>& alive) {
    Totals totals;
    for (std::size_t i = 0; i < panels.size(); ++i) {
        if (alive[i]) totals.ref = std::max(totals.ref, panels[i].log_scale);
    }
    if (totals.ref == -kInf) return totals;
    for (std::size_t i = 0; i < panels.size(); ++i) {
        if (!alive[i] || panels[i].log_scale == -kInf) continue;
        const double w = std::exp(panels[i].log_scale - totals.ref);
        totals.value += panels[i].value * w;
        totals.error += panels[i].error * w;
    }
    return totals;
}

}  // namespace

IntegralResult adaptive_integrate(const LogIntegrand& log_f, double a, double b, const QuadratureOptions& options) {
    if (!log_f) throw DomainError("adaptive_integrate: empty integrand");
    if (!std::isfinite(a)) throw DomainError("adaptive_integrate: lower limit must be finite");
    if (std::isnan(b) || b < a) throw DomainError("adaptive_integrate: need b >= a");
    if (!(options.rel_tol > 0.0)) throw DomainError("adaptive_integrate: rel_tol must be positive");
    if (b == a) return {};

    const bool infinite = std::isinf(b);
    std::vector<double> cuts{a};
    for (double bp : options.breakpoints) {
        if (bp > a && bp < b && std::isfinite(bp)) cuts.push_back(bp);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    if (!infinite) cuts.push_back(b);

    const double tail_start = cuts.back();
    double tail_scale = options.tail_scale > 0.0 ? options.tail_scale : std::max(1.0, std::abs(tail_start));
    const Integrator integrator(log_f, tail_start, tail_scale);

    std::vector<Panel> panels;
    std::vector<bool> alive;
    using Entry = std::pair<double, std::size_t>;  // (log error, index)
    std::priority_queue<Entry> queue;

    auto add = [&](const Panel& panel) {
        panels.push_back(panel);
        alive.push_back(true);
        queue.emplace(panel.log_error(), panels.size() - 1);
    };

    constexpr int kInitialPerSegment = 4;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double step = (cuts[k + 1] - cuts[k]) / kInitialPerSegment;
        for (int j = 0; j < kInitialPerSegment; ++j) {
            const double lo = cuts[k] + j * step;
            const double hi = j + 1 == kInitialPerSegment ? cuts[k + 1] : lo + step;
            add(integrator.evaluate(lo, hi, false));
        }
    }
    if (infinite) {
        constexpr int kMappedInitial = 8;
        for (int j = 0; j < kMappedInitial; ++j) {
            add(integrator.evaluate(double(j) / kMappedInitial, double(j + 1) / kMappedInitial, true));
        }
    }

    std::size_t live_count = panels.size();
    Totals totals = sum_panels(panels, alive);

    auto finish = [&](const Totals& t) {
        IntegralResult result;
        result.panels = live_count;
        if (t.value <= 0.0) return result;
        result.log_value = t.ref + std::log(t.value);
        result.rel_error = t.error / t.value;
        return result;
    };

    while (true) {
        if (totals.value <= 0.0 && totals.ref == -kInf) return finish(totals);
        if (totals.error <= options.rel_tol * totals.value) {
            const Totals exact = sum_panels(panels, alive);
            if (exact.error <= options.rel_tol * exact.value || exact.value <= 0.0) return finish(exact);
            totals = exact;
        }
        if (queue.empty()) {
            const Totals exact = sum_panels(panels, alive);
            const IntegralResult partial = finish(exact);
            throw ConvergenceError("adaptive_integrate: panels cannot be refined further", partial.log_value,
                                   partial.rel_error);
        }
        if (live_count >= options.max_panels) {
            const Totals exact = sum_panels(panels, alive);
            const IntegralResult partial = finish(exact);
            throw ConvergenceError("adaptive_integrate: panel budget of " + std::to_string(options.max_panels) +
                                       " exhausted",
                                   partial.log_value, partial.rel_error);
        }

        const std::size_t idx = queue.top().second;
        queue.pop();
        const Panel parent = panels[idx];
        const double mid = 0.5 * (parent.lo + parent.hi);
        if (!(mid > parent.lo && mid < parent.hi) ||
            parent.hi - parent.lo <= 8.0 * kEps * std::max(std::abs(parent.lo), std::abs(parent.hi))) {
            // unsplittable; its error stays in the totals
            continue;
        }
        alive[idx] = false;
        --live_count;
        const Panel left = integrator.evaluate(parent.lo, mid, parent.mapped);
        const Panel right = integrator.evaluate(mid, parent.hi, parent.mapped);

        const double new_ref = std::max({totals.ref, left.log_scale, right.log_scale});
        if (new_ref > totals.ref) {
            const double shrink = totals.ref == -kInf ? 0.0 : std::exp(totals.ref - new_ref);
            totals.value *= shrink;
            totals.error *= shrink;
            totals.ref = new_ref;
        }
        auto weight = [&](const Panel& p) {
            return p.log_scale == -kInf ? 0.0 : std::exp(p.log_scale - totals.ref);
        };
        const double wp = weight(parent);
        totals.value = std::max(0.0, totals.value - parent.value * wp) + left.value * weight(left) +
                       right.value * weight(right);
        totals.error = std::max(0.0, totals.error - parent.error * wp) + left.error * weight(left) +
                       right.error * weight(right);
        add(left);
        add(right);
        live_count += 2;
    }
}

IntegralResult key_relation_log_moment(const std::function<double(double)>& log_tail, double p, double lower,
                                       double mode, double scale, double rel_tol, std::size_t max_panels) {
    if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("key_relation_log_moment: p must be positive");
    if (!(lower >= 0.0) || !std::isfinite(lower)) throw DomainError("key_relation_log_moment: lower must be >= 0");
    const double log_p = std::log(p);
    const LogIntegrand integrand = [&](double t) {
        if (t <= 0.0) return p == 1.0 ? log_p + log_tail(0.0) : -kInf;
        const double lt = log_tail(t);
        if (lt == -kInf) return lt;
        return log_p + (p - 1.0) * std::log(t) + lt;
    };
    QuadratureOptions options;
    options.rel_tol = rel_tol;
    options.max_panels = max_panels;
    double tail_from = lower;
    if (mode > lower) {
        options.breakpoints.push_back(mode);
        tail_from = mode;
    }
    options.tail_scale = std::max({scale, tail_from, 1e-300});
    return adaptive_integrate(integrand, lower, kInf, options);
}

}  // namespace tailmoment
