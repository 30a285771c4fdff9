#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>

#include "cfv/cf_core.hpp"

using cfv::cplx;
using Catch::Approx;

TEST_CASE("frequency grid is symmetric with zero as a node", "[grid]") {
    const auto g = cfv::FrequencyGrid::make(50.0, 10001);
    CHECK(g.n_points == 10001);
    CHECK(g.spacing() == Approx(0.01));
    CHECK(g.node(g.center()) == 0.0);
    CHECK(g.node(0) == Approx(-50.0));
    CHECK(g.node(g.n_points - 1) == Approx(50.0));
}

TEST_CASE("frequency grid rounds even point counts up to odd", "[grid]") {
    const auto g = cfv::FrequencyGrid::make(20.0, 10000);
    CHECK(g.n_points == 10001);
    CHECK(g.node(g.center()) == 0.0);
}

TEST_CASE("frequency grid rejects bad parameters", "[grid]") {
    CHECK_THROWS_AS(cfv::FrequencyGrid::make(0.0, 101), std::invalid_argument);
    CHECK_THROWS_AS(cfv::FrequencyGrid::make(-1.0, 101), std::invalid_argument);
    CHECK_THROWS_AS(cfv::FrequencyGrid::make(10.0, 2), std::invalid_argument);
}

TEST_CASE("catalog CFs match their closed forms", "[analytic]") {
    const auto cauchy = cfv::cauchy_cf(0.0, 1.0);
    CHECK(std::abs(cauchy(2.0) - cplx(std::exp(-2.0), 0.0)) < 1e-15);

    const auto cauchy_shift = cfv::cauchy_cf(1.0, 1.0);
    CHECK(std::abs(cauchy_shift(1.0) - std::exp(cplx(-1.0, 1.0))) < 1e-15);

    const auto gauss = cfv::gaussian_cf(0.0, 1.0);
    CHECK(std::abs(gauss(1.5) - cplx(std::exp(-1.125), 0.0)) < 1e-15);

    const auto gauss_shift = cfv::gaussian_cf(1.0, 4.0);
    CHECK(std::abs(gauss_shift(0.5) - std::exp(cplx(-0.5, 0.5))) < 1e-15);

    const auto uni = cfv::uniform_cf(-1.0, 1.0);
    CHECK(std::abs(uni(2.0) - cplx(std::sin(2.0) / 2.0, 0.0)) < 1e-15);

    const auto point = cfv::degenerate_cf(3.0);
    CHECK(std::abs(point(0.7) - std::exp(cplx(0.0, 2.1))) < 1e-15);
}

TEST_CASE("uniform CF is finite and normalized near t = 0", "[analytic]") {
    const auto uni = cfv::uniform_cf(0.0, 2.0);
    const cplx tiny = uni(1e-9);
    CHECK(std::isfinite(tiny.real()));
    CHECK(std::abs(tiny - cplx(1.0, 1e-9)) < 1e-12);
    CHECK(uni(0.0) == cplx(1.0, 0.0));
}

TEST_CASE("catalog CFs satisfy normalization, boundedness, Hermitian symmetry", "[analytic]") {
    const cfv::AnalyticCF cfs[] = {cfv::cauchy_cf(1.0, 2.0), cfv::gaussian_cf(-0.5, 0.7),
                                   cfv::uniform_cf(-2.0, 5.0), cfv::degenerate_cf(-1.3)};
    for (const auto& cf : cfs) {
        CHECK(cf(0.0) == cplx(1.0, 0.0));
        for (int i = 0; i <= 200; ++i) {
            const double t = -10.0 + 0.1 * i;
            CHECK(std::abs(cf(t)) <= 1.0 + 1e-12);
            CHECK(std::abs(cf(-t) - std::conj(cf(t))) < 1e-15);
        }
    }
}

TEST_CASE("independent sums multiply CFs", "[analytic]") {
    // Cauchy(1,1) + Cauchy(-1,2) = Cauchy(0,3), Gaussian(1,1) + Gaussian(2,3) = Gaussian(3,4)
    const auto ca = cfv::cauchy_cf(1.0, 1.0), cb = cfv::cauchy_cf(-1.0, 2.0);
    const auto csum = cfv::cauchy_cf(0.0, 3.0);
    const auto ga = cfv::gaussian_cf(1.0, 1.0), gb = cfv::gaussian_cf(2.0, 3.0);
    const auto gsum = cfv::gaussian_cf(3.0, 4.0);
    for (double t : {-7.3, -1.0, -0.2, 0.0, 0.4, 2.0, 9.1}) {
        CHECK(std::abs(ca(t) * cb(t) - csum(t)) < 1e-14);
        CHECK(std::abs(ga(t) * gb(t) - gsum(t)) < 1e-14);
    }
}

TEST_CASE("affine maps transform CFs as phi(at) e^{ibt}", "[analytic]") {
    // 2x + 3 with x ~ N(1,1) is N(5,4); -x with x ~ Cauchy(1,2) is Cauchy(-1,2)
    const auto g = cfv::gaussian_cf(1.0, 1.0);
    const auto g_aff = cfv::gaussian_cf(5.0, 4.0);
    const auto c = cfv::cauchy_cf(1.0, 2.0);
    const auto c_neg = cfv::cauchy_cf(-1.0, 2.0);
    for (double t : {-3.0, -0.5, 0.0, 0.7, 1.9}) {
        CHECK(std::abs(g(2.0 * t) * std::exp(cplx(0.0, 3.0 * t)) - g_aff(t)) < 1e-14);
        CHECK(std::abs(c(-t) - c_neg(t)) < 1e-14);
    }
}

TEST_CASE("parameter validation rejects degenerate scales", "[analytic]") {
    CHECK_THROWS_AS(cfv::cauchy_cf(0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(cfv::cauchy_cf(0.0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(cfv::gaussian_cf(0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(cfv::uniform_cf(1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(cfv::uniform_cf(2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(cfv::gaussian_cf(std::nan(""), 1.0), std::invalid_argument);
    CHECK_NOTHROW(cfv::degenerate_cf(0.0));
}

TEST_CASE("sampled CF reproduces nodes exactly and interpolates between them", "[sampled]") {
    const auto grid = cfv::FrequencyGrid::make(5.0, 101);
    const auto gauss = cfv::gaussian_cf(0.3, 1.0);
    const auto s = cfv::sample_on_grid(gauss, grid);

    REQUIRE(s.samples.size() == 101);
    for (int j = 0; j < grid.n_points; ++j)
        CHECK(std::abs(s(grid.node(j)) - gauss(grid.node(j))) < 1e-15);

    // linear interpolation error is (spacing^2 / 8) |phi''| ~ 1.4e-3 here
    const double mid = grid.node(50) + 0.5 * grid.spacing();
    CHECK(std::abs(s(mid) - gauss(mid)) < 2e-3);
    CHECK(std::abs(s(mid) - 0.5 * (gauss(grid.node(50)) + gauss(grid.node(51)))) < 1e-15);
}

TEST_CASE("sampled CF extrapolates with the boundary value beyond the cutoff", "[sampled]") {
    const auto grid = cfv::FrequencyGrid::make(5.0, 101);
    const auto s = cfv::sample_on_grid(cfv::gaussian_cf(0.0, 1.0), grid);
    CHECK(s(7.0) == s.samples.back());
    CHECK(s(-7.0) == s.samples.front());
    CHECK(s(5.0) == s.samples.back());
}

TEST_CASE("grid sampling enforces Hermitian symmetry bit-exactly", "[sampled]") {
    const auto grid = cfv::FrequencyGrid::make(8.0, 321);
    const auto s = cfv::sample_on_grid(cfv::cauchy_cf(0.7, 1.3), grid);
    const int c = grid.center();
    CHECK(s.samples[c] == cplx(1.0, 0.0));
    for (int j = c; j < grid.n_points; ++j)
        CHECK(s.samples[2 * c - j] == std::conj(s.samples[j]));
}

TEST_CASE("variant dispatch matches direct evaluation", "[sampled]") {
    const cfv::MarginalCF a = cfv::gaussian_cf(1.0, 2.0);
    CHECK(std::abs(cfv::evaluate_cf(a, 0.9) - cfv::gaussian_cf(1.0, 2.0)(0.9)) < 1e-15);

    const auto grid = cfv::FrequencyGrid::make(5.0, 101);
    const cfv::MarginalCF b = cfv::sample_on_grid(cfv::gaussian_cf(1.0, 2.0), grid);
    CHECK(std::abs(cfv::evaluate_cf(b, 0.9) - cfv::evaluate_cf(a, 0.9)) < 1e-4);
}

TEST_CASE("moment extraction recovers light-tailed moments", "[moments]") {
    const auto g = cfv::gaussian_cf(1.0, 1.0);
    const auto m1 = cfv::moment_from_cf(g, 1, 1e-3);
    CHECK(m1.value == Approx(1.0).margin(1e-3));
    CHECK_FALSE(m1.suspect);

    const auto g0 = cfv::gaussian_cf(0.0, 1.0);
    const auto m2 = cfv::moment_from_cf(g0, 2, 1e-3);
    CHECK(m2.value == Approx(1.0).margin(1e-2));  // E[x^2] = variance here
    CHECK_FALSE(m2.suspect);

    const auto u = cfv::uniform_cf(0.0, 2.0);
    const auto mu1 = cfv::moment_from_cf(u, 1, 1e-3);
    CHECK(mu1.value == Approx(1.0).margin(1e-3));
    CHECK_FALSE(mu1.suspect);
}

TEST_CASE("moment extraction flags heavy tails", "[moments]") {
    // the Cauchy CF has no derivative at zero; both the shifted and the
    // symmetric case (where the raw first-moment stencil is exactly zero)
    // must come back flagged
    CHECK(cfv::moment_from_cf(cfv::cauchy_cf(1.0, 1.0), 1, 1e-3).suspect);
    CHECK(cfv::moment_from_cf(cfv::cauchy_cf(0.0, 1.0), 1, 1e-3).suspect);
    CHECK(cfv::moment_from_cf(cfv::cauchy_cf(0.0, 1.0), 2, 1e-3).suspect);
}

TEST_CASE("moment extraction on sampled CFs stays node-exact", "[moments]") {
    const auto grid = cfv::FrequencyGrid::make(50.0, 10001);
    const auto s = cfv::sample_on_grid(cfv::gaussian_cf(1.0, 1.0), grid);
    const auto m1 = cfv::moment_from_cf(s, 1);
    CHECK(m1.value == Approx(1.0).margin(1e-3));
    CHECK_FALSE(m1.suspect);

    const auto sc = cfv::sample_on_grid(cfv::cauchy_cf(1.0, 1.0), grid);
    CHECK(cfv::moment_from_cf(sc, 1).suspect);
}

TEST_CASE("moment order outside 1..2 is rejected", "[moments]") {
    CHECK_THROWS_AS(cfv::moment_from_cf(cfv::gaussian_cf(0.0, 1.0), 3, 1e-3),
                    std::invalid_argument);
    CHECK_THROWS_AS(cfv::moment_from_cf(cfv::gaussian_cf(0.0, 1.0), 0, 1e-3),
                    std::invalid_argument);
    CHECK_THROWS_AS(cfv::moment_from_cf(cfv::gaussian_cf(0.0, 1.0), 1, 0.0),
                    std::invalid_argument);
}
