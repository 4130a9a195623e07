#include <cmath>
#include <numbers>

#include "doctest.h"
#include "tailmoment/grid.hpp"
#include "tailmoment/special_functions.hpp"

using namespace tailmoment;

namespace {

// ln Gamma(x) at 40 digits (mpmath.loggamma), truncated to double.
struct Frozen {
    double x;
    double value;
};
constexpr Frozen kLogGamma[] = {
    {0.001, 6.907178885383853682512345},   {0.01, 4.599479878042021722513945},
    {0.1, 2.252712651734205959869702},     {0.5, 0.5723649429247000870717136756765},
    {0.7, 0.2608672465316665143857324},    {1.5, -0.1207822376352452223455184},
    {3.3, 0.9870985778947345878786793},    {10.0, 12.80182748008146961120771787},
    {17.25, 31.37462231367768648001276},   {123.456, 469.6055471299294687300692},
    {1000.0, 5905.220423209181211826077},  {54321.5, 537923.6480392066711084601},
    {1000000.0, 12815504.56914761165997697}};

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

}  // namespace

TEST_CASE("log_gamma exact points") {
    CHECK(std::abs(log_gamma(1.0)) < 1e-15);
    CHECK(std::abs(log_gamma(2.0)) < 1e-15);
    // 9! = 362880 by integer product
    long long fact = 1;
    for (int k = 2; k <= 9; ++k) fact *= k;
    CHECK(rel_err(log_gamma(10.0), std::log(double(fact))) < 1e-14);
    CHECK(rel_err(log_gamma(0.5), 0.5 * std::log(std::numbers::pi)) < 1e-14);
}

TEST_CASE("log_gamma against high-precision reference") {
    for (const auto& f : kLogGamma) {
        CAPTURE(f.x);
        CHECK(rel_err(log_gamma(f.x), f.value) < 1e-12);
    }
}

TEST_CASE("log_gamma against the C library on a log grid") {
    const Eigen::ArrayXd xs = geometric_grid(1e-3, 1e6, 2000);
    for (double x : xs) {
        const double want = std::lgamma(x);
        CAPTURE(x);
        if (std::abs(want) > 1e-2) {
            CHECK(rel_err(log_gamma(x), want) < 1e-12);
        } else {
            // near the roots at 1 and 2 relative error is meaningless
            CHECK(std::abs(log_gamma(x) - want) < 1e-14);
        }
    }
}

TEST_CASE("log_gamma rejects non-positive and non-finite input") {
    CHECK_THROWS_AS(log_gamma(0.0), DomainError);
    CHECK_THROWS_AS(log_gamma(-1.5), DomainError);
    CHECK_THROWS_AS(log_gamma(std::nan("")), DomainError);
    CHECK_THROWS_AS(log_gamma(std::numeric_limits<double>::infinity()), DomainError);
}

TEST_CASE("log_gamma recurrence and convexity") {
    const Eigen::ArrayXd xs = geometric_grid(0.5, 1e5, 1000);
    for (double x : xs) {
        CAPTURE(x);
        const double lx = std::log(x);
        const double diff = log_gamma(x + 1.0) - log_gamma(x);
        CHECK(std::abs(diff - lx) <= 1e-10 * std::max(std::abs(lx), 1e-3) + 1e-12);
    }
    const Eigen::ArrayXd uniform = linear_grid(0.01, 50.0, 5000);
    for (Eigen::Index i = 1; i + 1 < uniform.size(); ++i) {
        const double d2 = log_gamma(uniform(i + 1)) - 2.0 * log_gamma(uniform(i)) + log_gamma(uniform(i - 1));
        CHECK(d2 >= -1e-12);
    }
}

TEST_CASE("log_gamma templated on long double agrees with double") {
    for (const auto& f : kLogGamma) {
        CHECK(std::abs(double(log_gamma<long double>(f.x)) - f.value) <= 1e-12 * std::abs(f.value) + 1e-15);
    }
}

TEST_CASE("stirling constants") {
    const auto c = stirling_constants<double>();
    CHECK(std::abs(c.c2 - std::exp(1.0 / 12.0 + 0.5 * std::log(2.0 * std::numbers::pi))) < 4e-16 * c.c2);
    CHECK(c.c2 == doctest::Approx(2.724464422340845496811934507).epsilon(1e-15));
    CHECK(c.log_c2 == doctest::Approx(1.002271866538006075113663069).epsilon(1e-15));
}

TEST_CASE("stirling_log_upper") {
    // sqrt(2 pi) e^{-1} e^{1/12} at 40 digits
    CHECK(stirling_log_upper(1.0) == doctest::Approx(0.002271866538006075113663069738950973).epsilon(1e-13));
    CHECK(stirling_log_upper(1.0) > 0.0);
    CHECK(stirling_log_upper(10.0) >= log_gamma(10.0));
    CHECK(stirling_log_upper(10.0) - log_gamma(10.0) <= 1.0 / 120.0);
    CHECK(stirling_log_upper(100.0) - log_gamma(100.0) <= 1.0 / 1200.0);
    CHECK_THROWS_AS(stirling_log_upper(0.49), DomainError);
}

TEST_CASE("stirling sandwich on a grid") {
    const Eigen::ArrayXd xs = geometric_grid(0.5, 1e5, 500);
    for (double x : xs) {
        CAPTURE(x);
        const double lg = log_gamma(x);
        const double up = stirling_log_upper(x);
        const double slack = 1e-15 * std::max(1.0, std::abs(lg));
        CHECK(lg <= up + slack);
        CHECK(up <= lg + 1.0 / (12.0 * x) + slack);
    }
}
