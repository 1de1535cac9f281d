#pragma once
/** \file circle.hpp
    Arithmetic, metric and statistical tooling on the circle S^1 = R/Z.

    Points are stored by their canonical representative in [0,1). On top of
    the basic operations (wrap, rotate, shorter-arc metric, planar embedding)
    the module provides the number-theoretic diagnostics used by the
    invariant-circle certificates: continued fractions, a best-approximation
    rationality test, circular gap statistics and the star discrepancy.
*/
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace circle {

/// Default cutoff denominator for rationality_diagnostic.
inline constexpr long long kDefaultMaxDenominator = 1'000'000;

/// Default tolerance below which two circular gap lengths count as one.
inline constexpr double kDefaultMergeTol = 1e-9;

/** A point [x] of R/Z, held as its canonical representative in [0,1).
    Normalization happens on construction, so a CirclePoint is always valid;
    two points built from reals differing by an integer coincide up to
    arithmetic round-off.
*/
class CirclePoint {
public:
    CirclePoint() = default;
    /// Wraps a finite real into [0,1); throws std::domain_error on non-finite input.
    explicit CirclePoint(double x);
    double rep() const { return rep_; }

    friend bool operator==(CirclePoint a, CirclePoint b) { return a.rep_ == b.rep_; }
    friend bool operator!=(CirclePoint a, CirclePoint b) { return a.rep_ != b.rep_; }
    friend bool operator<(CirclePoint a, CirclePoint b) { return a.rep_ < b.rep_; }

private:
    double rep_ = 0.0;
};

/// Canonical representative x - floor(x), with the 1.0 rounding edge clamped to 0.
CirclePoint normalize(double x);

/// The rotated point [p + a]; a may be any finite real.
CirclePoint rotate(CirclePoint p, double a);

/// Shorter-arc distance min(|p - q|, 1 - |p - q|), always in [0, 0.5].
double dist(CirclePoint p, CirclePoint q);

/// Embedding [x] -> (cos 2 pi x, sin 2 pi x) on the unit circle in the plane.
std::pair<double, double> embed(CirclePoint p);

/** Partial quotients a1, a2, ... of x in (0,1), i.e. x = 1/(a1 + 1/(a2 + ...)).
    The expansion is truncated at max_terms, or earlier once the residual
    falls below the machine-precision guard (further terms would be noise).
*/
std::vector<long long> continued_fraction(double x, std::size_t max_terms);

/// A reduced fraction p/q with q >= 1.
struct Rational {
    long long p = 0;
    long long q = 1;
};

/** Best-approximation rationality test for x in (0,1).

    Returns the continued-fraction convergent p/q with q <= max_denominator
    satisfying |x - p/q| < 1/(2 q max_denominator), if any exists; such a
    convergent is the unique rational that is indistinguishable from x at the
    working resolution. A nullopt result reads "effectively irrational at
    denominators up to max_denominator".
*/
std::optional<Rational> rationality_diagnostic(double x,
                                               long long max_denominator = kDefaultMaxDenominator);

/// Circular gap structure of a finite point set.
struct GapStats {
    std::vector<double> sorted_gaps;  ///< all circular gaps, ascending; they sum to 1
    int distinct_gap_count = 0;       ///< number of gap lengths after merging within merge_tol
    double max_gap = 0.0;             ///< the largest gap
};

/** Sorts the representatives and measures the arcs between circularly
    adjacent points, including the wraparound arc. Gap lengths differing by
    less than merge_tol are merged when counting distinct values.
    Requires at least two points (duplicates allowed; they contribute
    zero-length gaps).
*/
GapStats gap_statistics(const std::vector<CirclePoint>& points,
                        double merge_tol = kDefaultMergeTol);

/// Number of distinct values in the set, merging circularly within tol.
int distinct_point_count(const std::vector<CirclePoint>& points,
                         double tol = kDefaultMergeTol);

/** Exact star discrepancy D*_N = sup_t |#{x_i < t}/N - t| over t in [0,1),
    computed by the closed-form sorted scan. Result is in (0, 1].
*/
double star_discrepancy(const std::vector<CirclePoint>& points);

}  // namespace circle
