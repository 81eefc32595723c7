#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "levy/common.hpp"
#include "levy/moments.hpp"
#include "levy/multiscale.hpp"
#include "levy/quadrature.hpp"

using namespace levy;

namespace {

TwoScaleRational onesided_pair(double a1, double a2) {
    return TwoScaleRational::make({a1, -a1, 1.0}, {a2, -a2, 1.0});
}

const double kThird = 1.0 / 3.0;
const double kTwoThirds = 2.0 / 3.0;

// x^mu against the kernel, adaptive composite panels plus a geometric tail.
// The head cutoff sits where the kernel's small-x decay has gone below
// 1e-11 of the total; tail panels ride the power-law decay to stop on the
// 1e-15 relative rule.
double kernel_moment_quad(double a1, double a2, double t, double mu, double head) {
    auto f = [&](double x) {
        return std::pow(x, mu) * kernel_h_onesided(a1, a2, t, x).value;
    };
    double sw = std::pow(t, 1.0 / std::min(a1, a2));
    double core = gl16_composite(f, head, sw, 60) + gl16_composite(f, sw, 8.0 * sw, 40);
    double tail = gl16_geometric_tail(f, 8.0 * sw, 4.0 * sw);
    return core + tail;
}

bool rel_close(double got, double want, double tol) {
    return std::fabs(got - want) <= tol * std::fabs(want);
}

}  // namespace

TEST_CASE("zeroth moment is exactly one") {
    for (auto& spec : {onesided_pair(0.5, kThird), onesided_pair(kTwoThirds, kThird),
                       onesided_pair(0.5, 0.5), onesided_pair(0.5, 0.25)}) {
        CHECK(moment_series(spec, 0.0, 1.0) == 1.0);
        CHECK(moment_series(spec, 0.0, 0.3) == 1.0);
        CHECK(stieltjes_rho(spec, 0, 1.0, MomentBasis::series) == 1.0);
        CHECK(stieltjes_rho(spec, 0, 1.0) == 1.0);
    }
    CHECK(catalog_moment(onesided_pair(0.5, 0.5), 0, 2.0) == 1.0);
    CHECK(catalog_moment(onesided_pair(kTwoThirds, kThird), 0, 2.0) == 1.0);
}

TEST_CASE("moment series reproduces high-precision references") {
    auto ht = onesided_pair(0.5, kThird);
    auto tt = onesided_pair(kTwoThirds, kThird);
    auto hh = onesided_pair(0.5, 0.5);
    struct Row {
        const TwoScaleRational* spec;
        double mu, t, want;
    };
    const Row rows[] = {
        {&ht, -1.0, 1.0, 0.552480084483214818885190950084},
        {&ht, -2.0, 1.0, 1.38952138617791817340161175922},
        {&ht, 0.2, 1.0, 2.30234801934051725011688202696},
        {&ht, -1.0, 1.4, 0.247851953277684455731056269992},
        {&tt, -2.0, 1.0, 0.637785916690424024057773685854},
        {&tt, -4.0, 1.0, 3.06528552992065364348941854425},
        {&tt, -2.0, 0.8, 1.45201523366728611558565514446},
        {&hh, -1.0, 1.0, 0.5},
        {&hh, -2.0, 1.0, 0.75},
        {&hh, -3.0, 1.0, 1.875},
        {&hh, -1.0, 0.7, 50.0 / 49.0},
    };
    for (const Row& r : rows) {
        CAPTURE(r.mu);
        CAPTURE(r.t);
        CHECK(rel_close(moment_series(*r.spec, r.mu, r.t), r.want, 1e-13));
    }
}

TEST_CASE("stieltjes orders agree between the series and the transform route") {
    // stieltjes_rho evaluates through the exponential-transform integral;
    // moment_series is the alternating series.  Same number both ways.
    auto ht = onesided_pair(0.5, kThird);
    auto tt = onesided_pair(kTwoThirds, kThird);
    for (int n = 1; n <= 4; ++n) {
        CAPTURE(n);
        double lp_ht = 1.0, lp_tt = 2.0;
        CHECK(rel_close(stieltjes_rho(ht, n, 1.0, MomentBasis::series),
                        moment_series(ht, -lp_ht * n, 1.0), 5e-13));
        CHECK(rel_close(stieltjes_rho(tt, n, 0.9, MomentBasis::series),
                        moment_series(tt, -lp_tt * n, 0.9), 5e-13));
    }
}

TEST_CASE("moment series agrees with kernel quadrature") {
    auto ht = onesided_pair(0.5, kThird);
    auto tt = onesided_pair(kTwoThirds, kThird);
    struct Row {
        const TwoScaleRational* spec;
        double a1, a2, mu, head;
    };
    const Row rows[] = {
        {&ht, 0.5, kThird, -1.0, 0.01},
        {&ht, 0.5, kThird, -2.0, 0.01},
        {&tt, kTwoThirds, kThird, -2.0, 0.04},
        {&tt, kTwoThirds, kThird, -4.0, 0.04},
    };
    for (const Row& r : rows) {
        CAPTURE(r.mu);
        double quad = kernel_moment_quad(r.a1, r.a2, 1.0, r.mu, r.head);
        CHECK(rel_close(moment_series(*r.spec, r.mu, 1.0), quad, 1e-4));
    }
}

TEST_CASE("catalog moment formulas") {
    auto hh = onesided_pair(0.5, 0.5);
    auto tt = onesided_pair(kThird, kTwoThirds);  // order must not matter
    CHECK(has_catalog_moments(hh));
    CHECK(has_catalog_moments(tt));
    CHECK_FALSE(has_catalog_moments(onesided_pair(0.5, kThird)));
    CHECK_FALSE(has_catalog_moments(onesided_pair(kThird, kThird)));

    CHECK(rel_close(catalog_moment(hh, 1, 1.0), 0.5, 1e-13));
    CHECK(rel_close(catalog_moment(hh, 2, 1.0), 0.75, 1e-13));
    CHECK(rel_close(catalog_moment(hh, 3, 2.0), 1.875 / 64.0, 1e-13));
    CHECK(rel_close(catalog_moment(tt, 1, 1.0), 360.0, 1e-12));
    CHECK(rel_close(catalog_moment(tt, 1, 0.5), 23040.0, 1e-12));
    CHECK(rel_close(catalog_moment(tt, 2, 1.0), 3.0 * 39916800.0 / 6.0, 1e-12));

    // For (1/2,1/2) the catalog and the collapsed-pair evaluation coincide.
    for (int n = 1; n <= 8; ++n) {
        CAPTURE(n);
        CHECK(rel_close(catalog_moment(hh, n, 1.3),
                        stieltjes_rho(hh, n, 1.3, MomentBasis::series), 1e-12));
    }
}

TEST_CASE("stieltjes weight matches its closed form") {
    auto hh = onesided_pair(0.5, 0.5);
    // W(t,x) = t/sqrt(pi x) e^{-x t^2} for the (1/2,1/2) pair
    CHECK(rel_close(stieltjes_weight(hh, 1.0, 1.0), std::exp(-1.0) / kSqrtPi, 1e-12));
    for (double t : {0.7, 1.0, 1.3}) {
        for (double x : {0.1, 0.5, 1.0, 2.0, 5.0}) {
            CAPTURE(t);
            CAPTURE(x);
            double closed = t / std::sqrt(kPi * x) * std::exp(-x * t * t);
            CHECK(rel_close(stieltjes_weight(hh, t, x), closed, 1e-11));
        }
    }
}

TEST_CASE("stieltjes weight integrates to its moment sequence") {
    // n-th moments of W by direct quadrature; the x = u^3 (resp. u^2)
    // substitution flattens the algebraic singularity of W at the origin.
    auto hh = onesided_pair(0.5, 0.5);
    auto quad_hh = [&](int n) {
        auto f = [&](double u) {
            return 2.0 * u * std::pow(u * u, n) * stieltjes_weight(hh, 1.0, u * u);
        };
        return gl16_composite(f, 1e-8, 6.0, 60);
    };
    CHECK(std::fabs(quad_hh(0) - 1.0) <= 1e-6);
    CHECK(std::fabs(quad_hh(1) - 0.5) <= 1e-4);
    CHECK(std::fabs(quad_hh(2) - 0.75) <= 1e-4);

    auto ht = onesided_pair(0.5, kThird);
    auto quad_ht = [&](int n) {
        auto f = [&](double u) {
            double x = u * u * u;
            return 3.0 * u * u * std::pow(x, n) * stieltjes_weight(ht, 1.0, x);
        };
        return gl16_composite(f, 1e-8, 8.0, 80);
    };
    CHECK(std::fabs(quad_ht(0) - 1.0) <= 1e-5);
    for (int n : {1, 2}) {
        CAPTURE(n);
        CHECK(rel_close(quad_ht(n), stieltjes_rho(ht, n, 1.0, MomentBasis::series), 1e-4));
    }

    // far outside the support scale the kernel envelope zeroes the weight
    CHECK(stieltjes_weight(ht, 1.0, 1e30) == 0.0);
}

TEST_CASE("moments are positive with positive third-order Hankel determinants") {
    auto hankel3 = [](const std::vector<double>& r) {
        return r[0] * (r[2] * r[4] - r[3] * r[3]) - r[1] * (r[1] * r[4] - r[3] * r[2]) +
               r[2] * (r[1] * r[3] - r[2] * r[2]);
    };
    auto seq = [](const TwoScaleRational& spec, MomentBasis b) {
        std::vector<double> r;
        for (int n = 0; n < 5; ++n) r.push_back(stieltjes_rho(spec, n, 1.0, b));
        return r;
    };

    auto hh = seq(onesided_pair(0.5, 0.5), MomentBasis::series);
    auto ht = seq(onesided_pair(0.5, kThird), MomentBasis::series);
    auto tt = seq(onesided_pair(kTwoThirds, kThird), MomentBasis::series);
    auto tc = seq(onesided_pair(kTwoThirds, kThird), MomentBasis::catalog);
    for (auto* s : {&hh, &ht, &tt, &tc})
        for (double v : *s) CHECK(v > 0.0);

    CHECK(rel_close(hankel3(hh), 0.75, 1e-10));
    CHECK(rel_close(hankel3(ht), 15.4033624079572581, 1e-8));
    CHECK(rel_close(hankel3(tt), 373.600460800636031, 1e-8));
    CHECK(hankel3(tc) > 0.0);
}

TEST_CASE("carleman diagnostic reproduces the fitted decay rates") {
    auto hh = carleman_diagnostic(onesided_pair(0.5, 0.5), 1.0, 40);
    CHECK(hh.basis_used == MomentBasis::catalog);
    CHECK(hh.verdict == MomentVerdict::unique);
    CHECK(std::fabs(hh.fitted_decay - 0.5) <= 0.1);
    CHECK(std::fabs(hh.fitted_decay - 0.486623133407570) <= 1e-9);

    auto tt = carleman_diagnostic(onesided_pair(kTwoThirds, kThird), 1.0, 40);
    CHECK(tt.basis_used == MomentBasis::catalog);
    CHECK(tt.verdict == MomentVerdict::non_unique_candidate);
    CHECK(std::fabs(tt.fitted_decay - 2.0) <= 0.1);
    CHECK(std::fabs(tt.fitted_decay - 1.978479437111389) <= 1e-9);

    auto ht = carleman_diagnostic(onesided_pair(0.5, kThird), 1.0, 40);
    CHECK(ht.basis_used == MomentBasis::series);
    CHECK(ht.verdict == MomentVerdict::unique);
    CHECK(std::fabs(ht.fitted_decay - 0.579908010182725) <= 1e-6);

    for (auto* rep : {&hh, &tt, &ht}) {
        REQUIRE(rep->terms.size() == 40);
        REQUIRE(rep->partial_sums.size() == 40);
        double run = 0.0;
        for (size_t i = 0; i < rep->terms.size(); ++i) {
            CHECK(rep->terms[i] > 0.0);
            run += rep->terms[i];
            CHECK(rep->partial_sums[i] == doctest::Approx(run).epsilon(1e-12));
        }
    }
}

TEST_CASE("the moment bases disagree for the two-thirds pair") {
    // The closed catalog entry and the kernel-consistent series route give
    // different sequences for (2/3,1/3); both classifications stay
    // reproducible, and the automatic basis follows the catalog.
    auto tt = onesided_pair(kTwoThirds, kThird);
    double series = stieltjes_rho(tt, 1, 1.0, MomentBasis::series);
    double closed = catalog_moment(tt, 1, 1.0);
    CHECK(closed / series > 500.0);

    auto rep = carleman_diagnostic(tt, 1.0, 40, MomentBasis::series);
    CHECK(rep.basis_used == MomentBasis::series);
    CHECK(rep.verdict == MomentVerdict::unique);
    CHECK(std::fabs(rep.fitted_decay - 0.603396161285757) <= 1e-6);
}

TEST_CASE("log weight is convex for the two-thirds pair") {
    auto tt = onesided_pair(kThird, kTwoThirds);
    std::vector<double> grid;
    for (int i = 0; i <= 25; ++i) grid.push_back(-2.5 + 0.2 * i);
    for (double t : {0.8, 1.0, 1.2}) {
        CAPTURE(t);
        auto rep = convexity_check(tt, t, grid);
        CHECK(rep.all_positive);
        CHECK(rep.window_start == grid.front());
    }

    auto rep = convexity_check(tt, 1.0, {-1.0, 0.0, 1.0});
    CHECK(std::fabs(rep.second[0] - 0.125807834572135) <= 1e-6);
    CHECK(std::fabs(rep.second[1] - 0.281195972549768) <= 1e-6);
    CHECK(std::fabs(rep.second[2] - 0.642597239770690) <= 1e-6);
}

TEST_CASE("log weight curvature matches the closed equal-exponent form") {
    // psi(y) for (1/2,1/2) is const + y/2 + t^2 e^y, so psi'' = t^2 e^y.
    auto hh = onesided_pair(0.5, 0.5);
    for (double t : {0.7, 1.2}) {
        std::vector<double> grid = {-2.0, -1.0, 0.0, 1.0, 2.0};
        auto rep = convexity_check(hh, t, grid);
        CHECK(rep.all_positive);
        for (size_t i = 0; i < grid.size(); ++i) {
            CAPTURE(t);
            CAPTURE(grid[i]);
            CHECK(rel_close(rep.second[i], t * t * std::exp(grid[i]), 1e-7));
        }
    }
}

TEST_CASE("moment sequences mark divergent orders") {
    auto ht = onesided_pair(0.5, kThird);
    auto seq = moment_sequence(ht, {-2.0, -1.0, 0.0, 0.2, 0.5, 1.0}, 1.0);
    REQUIRE(seq.rho.size() == 6);
    CHECK(rel_close(seq.rho[0], 1.38952138617791817, 1e-12));
    CHECK(rel_close(seq.rho[1], 0.552480084483214819, 1e-12));
    CHECK(seq.rho[2] == 1.0);
    CHECK(seq.rho[3] > 0.0);
    CHECK(std::isnan(seq.rho[4]));
    CHECK(std::isnan(seq.rho[5]));
    CHECK(seq.t == 1.0);
    CHECK(seq.mu_values.size() == 6);
}

TEST_CASE("moment domain and precision errors are reported") {
    auto ht = onesided_pair(0.5, kThird);
    auto tt = onesided_pair(kTwoThirds, kThird);

    // divergent orders: mu >= min(alpha)
    CHECK_THROWS_AS(moment_series(ht, kThird, 1.0), DomainError);
    CHECK_THROWS_AS(moment_series(ht, 0.4, 1.0), DomainError);
    CHECK_THROWS_AS(moment_series(tt, 1.0, 1.0), DomainError);

    // two-sided components have no one-sided moment problem
    auto two_sided = TwoScaleRational::make({2.0, 0.0, 1.0}, {1.5, -0.5, 1.0});
    CHECK_THROWS_AS(moment_series(two_sided, -1.0, 1.0), DomainError);
    CHECK_THROWS_AS(stieltjes_weight(two_sided, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(carleman_diagnostic(two_sided, 1.0, 20), DomainError);

    CHECK_THROWS_AS(moment_series(ht, -1.0, 0.0), DomainError);
    CHECK_THROWS_AS(moment_series(ht, -1.0, -2.0), DomainError);
    CHECK_THROWS_AS(carleman_diagnostic(ht, 1.0, 9), DomainError);
    CHECK_THROWS_AS(catalog_moment(ht, 1, 1.0), DomainError);
    CHECK_THROWS_AS(stieltjes_rho(ht, 1, 1.0, MomentBasis::catalog), DomainError);
    CHECK_THROWS_AS(stieltjes_rho(ht, -1, 1.0), DomainError);
    CHECK_THROWS_AS(stieltjes_weight(ht, 1.0, 0.0), DomainError);
    CHECK_THROWS_AS(stieltjes_weight(ht, 1.0, -1.0), DomainError);
    CHECK_THROWS_AS(convexity_check(ht, 1.0, {}), DomainError);

    // deep alternation eventually exhausts the wide-precision budget; the
    // transform route (stieltjes_rho) stays available there
    CHECK_THROWS_AS(moment_series(ht, -100.0, 1.0), NumericError);
    CHECK(stieltjes_rho_ln(ht, 100, 1.0, MomentBasis::series) > 0.0);
    // well before that point the two routes agree
    CHECK(std::fabs(std::log(moment_series(ht, -35.0, 1.0)) -
                    stieltjes_rho_ln(ht, 35, 1.0, MomentBasis::series)) <= 1e-12);

    // catalog value overflow: ln rho stays reportable
    CHECK_THROWS_AS(catalog_moment(tt, 40, 1.0), NumericError);
    CHECK(stieltjes_rho_ln(tt, 40, 1.0) > 709.0);
}
