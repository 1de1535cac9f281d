#pragma once
/** \file map1d.hpp
    One-parameter families of interval maps and their period-doubling
    structure: fixed points, 2-cycles with stability multipliers, the
    parameter window on which the 2-cycle exists and attracts, and the
    classical bifurcation-condition checks at the window's left edge.
*/
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace map1d {

/// Default residual tolerance for root finding.
inline constexpr double kDefaultRootTol = 1e-12;
/// Default tolerance for locating window boundaries in parameter space.
inline constexpr double kDefaultWindowTol = 1e-6;
/// Default finite-difference step for first derivatives.
inline constexpr double kDefaultDerivStep = 1e-5;
/// Finite-difference step for second and third derivatives.
inline constexpr double kHighDerivStep = 1e-3;

/** A one-parameter family of interval maps r -> f(lambda, r).

    eval must be callable on [domain_lo, domain_hi] (and a small neighborhood,
    for finite differences). deriv is the r-derivative; families built through
    make_family without one fall back to a central difference.
*/
struct MapFamily {
    std::string name;
    double domain_lo = 0.0;
    double domain_hi = 1.0;
    double lambda_lo = 0.0;  ///< meaningful parameter range (inclusive)
    double lambda_hi = 0.0;
    std::function<double(double, double)> eval;   ///< (lambda, r) -> f(lambda, r)
    std::function<double(double, double)> deriv;  ///< (lambda, r) -> df/dr

    bool contains(double r) const { return r >= domain_lo && r <= domain_hi; }
};

/// The logistic family f(lambda, r) = lambda r (1 - r) on [0,1], lambda in [0,4].
MapFamily logistic_family();

/** Builds a family from closures. When deriv is empty, a central finite
    difference of step fd_step is installed in its place.
*/
MapFamily make_family(std::string name, double domain_lo, double domain_hi,
                      std::function<double(double, double)> eval,
                      std::function<double(double, double)> deriv = {},
                      double fd_step = kDefaultDerivStep,
                      double lambda_lo = -1e308, double lambda_hi = 1e308);

/** A period-2 orbit {r1, r2} of f(lambda, .) with r1 < r2, f(r1) = r2 and
    f(r2) = r1. residual is the larger defect |f(f(ri)) - ri|; multiplier is
    f'(r1) f'(r2), the derivative of the second iterate along the cycle.
*/
struct TwoCycle {
    double lambda = 0.0;
    double r1 = 0.0;
    double r2 = 0.0;
    double multiplier = 0.0;
    double residual = 0.0;
};

/// Parameter window of the period-doubled regime.
struct DoublingWindow {
    double lambda_c = 0.0;  ///< birth of the 2-cycle
    double lambda_0 = 0.0;  ///< loss of stability (|multiplier| reaches 1)
};

struct NoTwoCycle : std::runtime_error {
    explicit NoTwoCycle(const std::string& what) : std::runtime_error(what) {}
};

struct AmbiguousCycles : std::runtime_error {
    AmbiguousCycles(const std::string& what, std::vector<TwoCycle> found)
        : std::runtime_error(what), cycles(std::move(found)) {}
    std::vector<TwoCycle> cycles;  ///< every 2-cycle found, sorted by r1
};

struct WindowNotFound : std::runtime_error {
    explicit WindowNotFound(const std::string& what) : std::runtime_error(what) {}
};

struct NoFixedPoint : std::runtime_error {
    explicit NoFixedPoint(const std::string& what) : std::runtime_error(what) {}
};

/** All solutions of f(lambda, r) = r in the family domain, ascending, each
    with residual below tol. Roots are located by a sign-change scan over
    4096 uniform cells, refined by bisection and a short Newton polish;
    duplicates within 10 tol are merged.
*/
std::vector<double> find_fixed_points(const MapFamily& fam, double lambda,
                                      double tol = kDefaultRootTol);

/** The period-2 orbit of f(lambda, .), found by the same scan applied to the
    second iterate with the fixed points removed. Throws NoTwoCycle when no
    2-cycle exists at this parameter, AmbiguousCycles (carrying all of them)
    when more than one does.
*/
TwoCycle find_two_cycle(const MapFamily& fam, double lambda, double tol = kDefaultRootTol);

/// Stability multiplier f'(lambda, r1) f'(lambda, r2) of the cycle.
double cycle_multiplier(const MapFamily& fam, const TwoCycle& cyc);

/** Locates the doubling window inside [lambda_lo, lambda_hi]: lambda_c is the
    infimum of parameters where find_two_cycle succeeds (bisection on
    success/failure), lambda_0 the first parameter beyond it where
    |multiplier| reaches 1 from below. Both are accurate to tol. Throws
    WindowNotFound when the cycle never appears or never destabilizes in range.
*/
DoublingWindow doubling_window(const MapFamily& fam, double lambda_lo, double lambda_hi,
                               double tol = kDefaultWindowTol);

/// Pass thresholds for check_doubling_condition.
struct ConditionThresholds {
    double derivative_tol = 1e-6;     ///< |f' + 1| must fall below this
    double transversality_min = 1e-6; ///< |d/dlambda (f^2)'| must exceed this
    double nondegeneracy_min = 1e-6;  ///< |-2 f''' - 3 (f'')^2| must exceed this
};

/// Outcome of the three classical period-doubling condition checks.
struct ConditionReport {
    double fixed_point = 0.0;        ///< the branch x* examined
    double derivative = 0.0;         ///< f'(lambda_c, x*)
    double derivative_defect = 0.0;  ///< |f'(lambda_c, x*) + 1|
    bool derivative_ok = false;
    double transversality = 0.0;     ///< d/dlambda of (f^2)'(lambda, x*(lambda))
    bool transversality_ok = false;
    double nondegeneracy = 0.0;      ///< -2 f''' - 3 (f'')^2 at (lambda_c, x*)
    bool nondegeneracy_ok = false;

    bool passed() const { return derivative_ok && transversality_ok && nondegeneracy_ok; }
};

/** Evaluates the doubling conditions at parameter lambda_c on the fixed-point
    branch whose derivative is closest to -1: the eigenvalue condition
    f' = -1, transversality of the second-iterate derivative in lambda
    (finite difference of step h), and the cubic nondegeneracy
    -2 f''' - 3 (f'')^2 != 0 (twice the Schwarzian-type combination at x*,
    estimated with central differences). Throws NoFixedPoint when the family
    has no fixed point at lambda_c.
*/
ConditionReport check_doubling_condition(const MapFamily& fam, double lambda_c,
                                         double h = kDefaultDerivStep,
                                         const ConditionThresholds& thresholds = {});

}  // namespace map1d
