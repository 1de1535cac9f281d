#include "doctest.h"

#include "doublecircle/map1d.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

using map1d::MapFamily;
using map1d::TwoCycle;

namespace {

// Closed-form period-2 points of the logistic map, ordered r1 < r2.
std::pair<double, double> logistic_cycle_closed_form(double lambda) {
    const double s = std::sqrt((lambda - 3.0) * (lambda + 1.0));
    return {((lambda + 1.0) - s) / (2.0 * lambda), ((lambda + 1.0) + s) / (2.0 * lambda)};
}

// The second-iterate derivative along that cycle collapses to a polynomial
// in the parameter alone.
double logistic_multiplier_identity(double lambda) {
    return -lambda * lambda + 2.0 * lambda + 4.0;
}

// Every root of g on [lo, hi], found independently of the library: a dense
// uniform scan for sign changes, each refined by plain bisection.
std::vector<double> roots_bisect_oracle(const std::function<double(double)>& g, double lo,
                                        double hi, int cells) {
    std::vector<double> roots;
    double x0 = lo;
    double g0 = g(lo);
    for (int j = 1; j <= cells; ++j) {
        const double x1 = lo + (hi - lo) * static_cast<double>(j) / cells;
        const double g1 = g(x1);
        if (g0 == 0.0) roots.push_back(x0);
        else if ((g0 < 0.0) != (g1 < 0.0) && g1 != 0.0) {
            double a = x0, b = x1, ga = g0;
            while (b - a > 1e-14) {
                const double mid = 0.5 * (a + b);
                const double gm = g(mid);
                if (gm == 0.0) { a = mid; b = mid; break; }
                if ((ga < 0.0) != (gm < 0.0)) b = mid;
                else { a = mid; ga = gm; }
            }
            roots.push_back(0.5 * (a + b));
        }
        x0 = x1;
        g0 = g1;
    }
    if (g0 == 0.0) roots.push_back(hi);
    return roots;
}

// Odd quintic with exactly the symmetric 2-cycles {-1,1} and {-2,2}:
// f(x) = -x (1 + 0.1 (x^2-1)(x^2-4)).
double odd_quintic(double x) { return -1.4 * x + 0.5 * x * x * x - 0.1 * std::pow(x, 5); }
double odd_quintic_deriv(double x) { return -1.4 + 1.5 * x * x - 0.5 * std::pow(x, 4); }

}  // namespace

TEST_CASE("logistic family evaluation and derivative") {
    const MapFamily fam = map1d::logistic_family();
    CHECK(fam.eval(3.2, 0.5) == doctest::Approx(0.8).epsilon(1e-15));
    for (const double lambda : {0.5, 1.0, 2.7, 3.2, 4.0}) {
        CHECK(fam.eval(lambda, 0.0) == 0.0);
        CHECK(fam.eval(lambda, 1.0) == doctest::Approx(0.0).epsilon(1e-15));
    }
    CHECK(fam.deriv(3.0, 2.0 / 3.0) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(fam.contains(0.0));
    CHECK(fam.contains(1.0));
    CHECK(!fam.contains(-0.01));
    CHECK(!fam.contains(1.01));

    // The map is quadratic in r, so a central difference reproduces the
    // analytic derivative up to rounding in the difference quotient.
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> rdraw(0.0, 1.0);
    std::uniform_real_distribution<double> ldraw(0.5, 4.0);
    const double h = 1e-5;
    for (int i = 0; i < 200; ++i) {
        const double lambda = ldraw(rng);
        const double r = rdraw(rng);
        const double fd = (fam.eval(lambda, r + h) - fam.eval(lambda, r - h)) / (2.0 * h);
        CHECK(std::fabs(fd - fam.deriv(lambda, r)) <= 1e-9);
    }
}

TEST_CASE("make_family installs a finite-difference derivative when none is given") {
    const MapFamily cubic = map1d::make_family(
        "cubic", -1.0, 1.0, [](double lambda, double r) { return lambda * r * r * r; });
    const double lambda = 0.7;
    for (const double r : {-0.8, -0.25, 0.0, 0.4, 0.9}) {
        const double exact = 3.0 * lambda * r * r;
        CHECK(std::fabs(cubic.deriv(lambda, r) - exact) <= 1e-8);
    }

    CHECK_THROWS_AS(map1d::make_family("bad", 1.0, 1.0, [](double, double r) { return r; }),
                    std::invalid_argument);
    CHECK_THROWS_AS(map1d::make_family("bad", 0.0, 1.0, {}), std::invalid_argument);
}

TEST_CASE("fixed points of the logistic map") {
    const MapFamily fam = map1d::logistic_family();

    const auto fp32 = map1d::find_fixed_points(fam, 3.2);
    REQUIRE(fp32.size() == 2);
    CHECK(std::fabs(fp32[0] - 0.0) <= 1e-12);
    CHECK(std::fabs(fp32[1] - 0.6875) <= 1e-12);
    CHECK(std::is_sorted(fp32.begin(), fp32.end()));

    const auto fp05 = map1d::find_fixed_points(fam, 0.5);
    REQUIRE(fp05.size() == 1);
    CHECK(std::fabs(fp05[0]) <= 1e-12);

    // At lambda = 1 the origin is a tangent (double) root of f(r) - r; it sits
    // on a scan node and must still be reported exactly once.
    const auto fp10 = map1d::find_fixed_points(fam, 1.0);
    REQUIRE(fp10.size() == 1);
    CHECK(fp10[0] == 0.0);

    CHECK_THROWS_AS(map1d::find_fixed_points(fam, 3.2, 0.0), std::invalid_argument);
}

TEST_CASE("two-cycle of the logistic map matches the closed form") {
    const MapFamily fam = map1d::logistic_family();
    for (const double lambda : {3.05, 3.1, 3.2, 3.3, 3.4}) {
        const TwoCycle cyc = map1d::find_two_cycle(fam, lambda);
        const auto [r1, r2] = logistic_cycle_closed_form(lambda);
        CHECK(cyc.lambda == lambda);
        CHECK(cyc.r1 < cyc.r2);
        CHECK(std::fabs(cyc.r1 - r1) <= 1e-10);
        CHECK(std::fabs(cyc.r2 - r2) <= 1e-10);
        CHECK(cyc.residual < 1e-12);
        CHECK(std::fabs(cyc.multiplier - logistic_multiplier_identity(lambda)) <= 1e-9);
        CHECK(std::fabs(map1d::cycle_multiplier(fam, cyc) - cyc.multiplier) <= 1e-15);

        // The cycle genuinely swaps under one application of the map.
        CHECK(std::fabs(fam.eval(lambda, cyc.r1) - cyc.r2) <= 1e-11);
        CHECK(std::fabs(fam.eval(lambda, cyc.r2) - cyc.r1) <= 1e-11);
    }
}

TEST_CASE("two-cycle points agree with a dense bisection oracle") {
    const MapFamily fam = map1d::logistic_family();
    const double lambda = 3.2;
    const TwoCycle cyc = map1d::find_two_cycle(fam, lambda);

    const auto g2 = [&](double r) { return fam.eval(lambda, fam.eval(lambda, r)) - r; };
    auto roots = roots_bisect_oracle(g2, 0.0, 1.0, 50000);
    // Drop the two fixed points (0 and 1 - 1/lambda); the rest is the cycle.
    const double fp = 1.0 - 1.0 / lambda;
    std::vector<double> cycle_roots;
    for (const double r : roots) {
        if (std::fabs(r) > 1e-6 && std::fabs(r - fp) > 1e-6) cycle_roots.push_back(r);
    }
    REQUIRE(cycle_roots.size() == 2);
    CHECK(std::fabs(cycle_roots[0] - cyc.r1) <= 1e-9);
    CHECK(std::fabs(cycle_roots[1] - cyc.r2) <= 1e-9);
}

TEST_CASE("no two-cycle exists before the doubling parameter") {
    const MapFamily fam = map1d::logistic_family();
    CHECK_THROWS_AS(map1d::find_two_cycle(fam, 2.9), map1d::NoTwoCycle);
    CHECK_THROWS_AS(map1d::find_two_cycle(fam, 1.5), map1d::NoTwoCycle);
}

TEST_CASE("multiple two-cycles are reported as ambiguous, with all of them attached") {
    const MapFamily fam = map1d::make_family(
        "odd-quintic", -2.5, 2.5, [](double, double r) { return odd_quintic(r); },
        [](double, double r) { return odd_quintic_deriv(r); });

    // The pairs {-1, 1} and {-2, 2} both satisfy f(x) = -x, so each is a
    // 2-cycle of this odd map.
    CHECK(odd_quintic(1.0) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(odd_quintic(2.0) == doctest::Approx(-2.0).epsilon(1e-15));

    bool threw = false;
    try {
        map1d::find_two_cycle(fam, 0.0);
    } catch (const map1d::AmbiguousCycles& e) {
        threw = true;
        CHECK(e.cycles.size() >= 2);
        bool found_inner = false;
        bool found_outer = false;
        for (const TwoCycle& c : e.cycles) {
            CHECK(c.residual <= 1e-10);
            if (std::fabs(c.r1 + 1.0) < 1e-8 && std::fabs(c.r2 - 1.0) < 1e-8) found_inner = true;
            if (std::fabs(c.r1 + 2.0) < 1e-8 && std::fabs(c.r2 - 2.0) < 1e-8) found_outer = true;
        }
        CHECK(found_inner);
        CHECK(found_outer);
    }
    CHECK(threw);
}

TEST_CASE("doubling window endpoints for the logistic family") {
    const MapFamily fam = map1d::logistic_family();
    const auto win = map1d::doubling_window(fam, 2.5, 3.6);
    CHECK(std::fabs(win.lambda_c - 3.0) <= 1e-6);
    CHECK(std::fabs(win.lambda_0 - (1.0 + std::sqrt(6.0))) <= 1e-6);

    CHECK_THROWS_AS(map1d::doubling_window(fam, 2.0, 2.9), map1d::WindowNotFound);
    CHECK_THROWS_AS(map1d::doubling_window(fam, 3.6, 2.5), std::invalid_argument);
    CHECK_THROWS_AS(map1d::doubling_window(fam, 2.5, 3.6, -1.0), std::invalid_argument);
}

TEST_CASE("the cycle attracts strictly inside the window and repels beyond it") {
    const MapFamily fam = map1d::logistic_family();
    const auto win = map1d::doubling_window(fam, 2.5, 3.6);
    for (int i = 1; i <= 8; ++i) {
        const double lambda =
            win.lambda_c + 1e-3 + (win.lambda_0 - win.lambda_c - 2e-3) * i / 8.0;
        const TwoCycle cyc = map1d::find_two_cycle(fam, lambda);
        CHECK(std::fabs(cyc.multiplier) < 1.0);
    }
    const TwoCycle beyond = map1d::find_two_cycle(fam, win.lambda_0 + 1e-3);
    CHECK(std::fabs(beyond.multiplier) > 1.0);
}

TEST_CASE("multiplier identity holds across the window") {
    const MapFamily fam = map1d::logistic_family();
    for (int i = 0; i < 50; ++i) {
        const double lambda = 3.02 + (3.43 - 3.02) * i / 49.0;
        const TwoCycle cyc = map1d::find_two_cycle(fam, lambda);
        CHECK(std::fabs(cyc.multiplier - logistic_multiplier_identity(lambda)) <= 1e-9);
    }
    // The identity reaches -1 exactly at the upper window edge.
    const TwoCycle edge = map1d::find_two_cycle(fam, 1.0 + std::sqrt(6.0));
    CHECK(std::fabs(edge.multiplier + 1.0) <= 1e-9);
}

TEST_CASE("cycle separation shrinks toward the birth parameter") {
    const MapFamily fam = map1d::logistic_family();
    double prev = 1.0;
    for (const double delta : {1e-2, 1e-3, 1e-4, 1e-5}) {
        const TwoCycle cyc = map1d::find_two_cycle(fam, 3.0 + delta);
        const double sep = cyc.r2 - cyc.r1;
        const double expected = std::sqrt(delta * (4.0 + delta)) / (3.0 + delta);
        CHECK(std::fabs(sep - expected) <= 1e-9);
        CHECK(sep < prev);
        prev = sep;
    }
}

TEST_CASE("doubling conditions hold at the logistic birth parameter") {
    const MapFamily fam = map1d::logistic_family();
    const auto rep = map1d::check_doubling_condition(fam, 3.0);
    CHECK(std::fabs(rep.fixed_point - 2.0 / 3.0) <= 1e-10);
    CHECK(rep.derivative_defect < 1e-9);
    CHECK(rep.derivative_ok);
    // d/dlambda of (2 - lambda)^2 at lambda = 3.
    CHECK(rep.transversality == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(rep.transversality_ok);
    // -2 f''' - 3 (f'')^2 with f'' = -2 lambda, f''' = 0.
    CHECK(rep.nondegeneracy == doctest::Approx(-108.0).epsilon(1e-3));
    CHECK(rep.nondegeneracy_ok);
    CHECK(rep.passed());

    CHECK_THROWS_AS(map1d::check_doubling_condition(fam, 3.0, -1e-5), std::invalid_argument);
}

TEST_CASE("doubling conditions fail away from the birth parameter") {
    const MapFamily fam = map1d::logistic_family();
    const auto rep = map1d::check_doubling_condition(fam, 2.5);
    CHECK(rep.derivative == doctest::Approx(-0.5).epsilon(1e-9));
    CHECK(rep.derivative_defect == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(!rep.derivative_ok);
    CHECK(!rep.passed());
}

TEST_CASE("a linear family fails the cubic nondegeneracy condition") {
    const MapFamily lin = map1d::make_family(
        "linear", -1.0, 1.0, [](double lambda, double r) { return lambda * r; },
        [](double lambda, double) { return lambda; });
    const auto rep = map1d::check_doubling_condition(lin, -1.0);
    CHECK(rep.derivative_defect < 1e-9);
    CHECK(rep.derivative_ok);
    CHECK(std::fabs(rep.transversality - (-2.0)) <= 1e-3);
    CHECK(rep.transversality_ok);
    CHECK(std::fabs(rep.nondegeneracy) <= 1e-7);
    CHECK(!rep.nondegeneracy_ok);
    CHECK(!rep.passed());
}

TEST_CASE("condition checks require a fixed point") {
    const MapFamily shifted = map1d::make_family(
        "shift", 0.0, 1.0, [](double, double r) { return r + 1.0; },
        [](double, double) { return 1.0; });
    CHECK_THROWS_AS(map1d::check_doubling_condition(shifted, 0.5), map1d::NoFixedPoint);
}

TEST_CASE("random starts settle into alternation around the two-cycle") {
    const MapFamily fam = map1d::logistic_family();
    const double lambda = 3.2;
    const TwoCycle cyc = map1d::find_two_cycle(fam, lambda);

    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> draw(0.01, 0.99);
    for (int s = 0; s < 100; ++s) {
        double r = draw(rng);
        for (int k = 0; k < 10000 - 100; ++k) r = fam.eval(lambda, r);
        // The tail alternates between neighborhoods of the two cycle points.
        double lo = r;
        bool ok = true;
        for (int k = 0; k < 100; ++k) {
            const double near1 = std::fabs(lo - cyc.r1);
            const double near2 = std::fabs(lo - cyc.r2);
            if (std::min(near1, near2) > 1e-8) ok = false;
            lo = fam.eval(lambda, lo);
        }
        CHECK(ok);
    }
}
