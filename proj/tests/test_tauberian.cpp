#include <cmath>
#include <numbers>

#include "doctest.h"
#include "tailmoment/errors.hpp"
#include "tailmoment/grid.hpp"
#include "tailmoment/oracle.hpp"
#include "tailmoment/special_functions.hpp"
#include "tailmoment/tauberian.hpp"

using namespace tailmoment;

TEST_CASE("tail ratios of e^{-t} are identically one") {
    const auto d = tail_ratio_sequence([](double t) { return -t; }, default_tauberian_grid());
    for (double r : d.ratios) CHECK(r == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(d.limit_estimate == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d.residual < 1e-12);
}

TEST_CASE("tail limits") {
    const Eigen::ArrayXd grid = default_tauberian_grid();
    const auto poly = tail_ratio_sequence([](double t) { return 2.0 * std::log(t) - t; }, grid);
    CHECK(std::abs(poly.limit_estimate - 1.0) < 1e-3);
    // the fitted correction carries the -2 ln t / t term
    CHECK(poly.log_coefficient == doctest::Approx(-2.0).epsilon(1e-6));
    const auto fast = tail_ratio_sequence([](double t) { return -2.0 * t; }, grid);
    CHECK(fast.limit_estimate == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("moment ratios") {
    const Eigen::ArrayXd grid = default_tauberian_grid();
    const MomentEnvelope pe([](double p) { return p * (std::log(p) - 1.0); }, 1.0, 20000.0, "(p/e)^p");
    const auto a = moment_ratio_sequence(pe, grid);
    for (double r : a.ratios) CHECK(r == doctest::Approx(1.0).epsilon(1e-12));

    const MomentEnvelope two([](double p) { return p * (std::log(2.0 * p) - 1.0); }, 1.0, 20000.0, "(2p/e)^p");
    CHECK(moment_ratio_sequence(two, grid).limit_estimate == doctest::Approx(2.0).epsilon(1e-12));

    Eigen::ArrayXd small = linear_grid(10.0, 17.0, 8);
    const auto g = moment_ratio_sequence(MomentEnvelope::exponential(1.0, 100.0), small);
    // (10!)^{1/10} e / 10
    CHECK(g.ratios(0) == doctest::Approx(1.231036089892897).epsilon(1e-13));
}

TEST_CASE("duality holds for the oracles") {
    const Eigen::ArrayXd grid = default_tauberian_grid();
    for (const auto& d : {oracle_by_name("exp1"), oracle_by_name("gamma3"), oracle_by_name("weibull2").power_transformed(2.0)}) {
        CAPTURE(d.name());
        const DualityReport r = duality_check(d, grid, grid);
        CHECK(r.passed);
        CHECK(r.tail_unit);
        CHECK(r.moment_unit);
        CHECK(std::abs(r.tail.limit_estimate - 1.0) < 5e-3);
        CHECK(std::abs(r.moment.limit_estimate - 1.0) < 5e-3);
    }
}

TEST_CASE("rate C: tail limit C, moment limit 1/C") {
    const Eigen::ArrayXd grid = default_tauberian_grid();
    for (double c : {0.5, 1.0, 2.0}) {
        CAPTURE(c);
        const DualityReport r = duality_check(OracleDistribution::exponential(c), grid, grid);
        CHECK(r.tail.limit_estimate == doctest::Approx(c).epsilon(1e-9));
        CHECK(r.tail.limit_estimate * r.moment.limit_estimate == doctest::Approx(1.0).epsilon(5e-3));
        CHECK(r.passed == (c == 1.0));
    }
}

TEST_CASE("refining the grid does not inflate the residual") {
    const OracleDistribution g3 = oracle_by_name("gamma3");
    const Eigen::ArrayXd coarse = default_tauberian_grid();
    const Eigen::ArrayXd fine = geometric_grid(16.0, 16384.0, 24);
    const DualityReport a = duality_check(g3, coarse, coarse);
    const DualityReport b = duality_check(g3, fine, fine);
    CHECK(b.tail.residual <= 2.0 * a.tail.residual + 1e-15);
    CHECK(b.moment.residual <= 2.0 * a.moment.residual + 1e-15);
}

TEST_CASE("degenerate grids are rejected") {
    const Eigen::ArrayXd seven = geometric_grid(16.0, 1024.0, 7);
    CHECK_THROWS_AS(tail_ratio_sequence([](double t) { return -t; }, seven), DomainError);
    CHECK_THROWS_AS(moment_ratio_sequence(MomentEnvelope::exponential(1.0, 2000.0), seven), DomainError);
    CHECK_THROWS_AS(tail_ratio_sequence([](double) { return 0.0; }, default_tauberian_grid()), DomainError);
}
