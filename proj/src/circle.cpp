#include "doublecircle/circle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace circle {

namespace {
// Residual below this level is indistinguishable from accumulated round-off,
// so continued-fraction expansions stop rather than emit noise terms.
constexpr double kResidualGuard = 1e-12;

constexpr double kTwoPi = 6.283185307179586476925286766559;
}  // namespace

CirclePoint::CirclePoint(double x) {
    if (!std::isfinite(x)) throw std::domain_error("CirclePoint: non-finite representative");
    double r = x - std::floor(x);
    // x - floor(x) can round up to exactly 1.0 for x just below an integer.
    if (r >= 1.0) r = 0.0;
    rep_ = r;
}

CirclePoint normalize(double x) { return CirclePoint(x); }

CirclePoint rotate(CirclePoint p, double a) { return CirclePoint(p.rep() + a); }

double dist(CirclePoint p, CirclePoint q) {
    const double d = std::fabs(p.rep() - q.rep());
    return std::min(d, 1.0 - d);
}

std::pair<double, double> embed(CirclePoint p) {
    const double t = kTwoPi * p.rep();
    return {std::cos(t), std::sin(t)};
}

std::vector<long long> continued_fraction(double x, std::size_t max_terms) {
    if (!(x > 0.0 && x < 1.0)) throw std::domain_error("continued_fraction: x must lie in (0,1)");
    if (max_terms == 0) throw std::invalid_argument("continued_fraction: max_terms must be >= 1");
    std::vector<long long> terms;
    double r = x;
    while (terms.size() < max_terms && r > kResidualGuard) {
        const double inv = 1.0 / r;
        const double a = std::floor(inv);
        terms.push_back(static_cast<long long>(a));
        r = inv - a;
    }
    return terms;
}

std::optional<Rational> rationality_diagnostic(double x, long long max_denominator) {
    if (!(x > 0.0 && x < 1.0))
        throw std::domain_error("rationality_diagnostic: x must lie in (0,1)");
    if (max_denominator < 1)
        throw std::invalid_argument("rationality_diagnostic: max_denominator must be >= 1");

    // Walk the convergents p_k/q_k of x = [0; a1, a2, ...]. Any rational
    // within 1/(2 q max_denominator) of x (q <= max_denominator) satisfies
    // |x - p/q| < 1/(2 q^2) and is therefore itself a convergent, so checking
    // convergents alone is exhaustive for this criterion.
    long long p_prev = 1, q_prev = 0;  // k = -1
    long long p = 0, q = 1;            // k = 0: convergent 0/1
    double r = x;
    for (int iter = 0; iter < 64; ++iter) {
        if (q > max_denominator) break;
        const double err = std::fabs(x - static_cast<double>(p) / static_cast<double>(q));
        if (err < 1.0 / (2.0 * static_cast<double>(q) * static_cast<double>(max_denominator)))
            return Rational{p, q};
        if (r <= kResidualGuard) break;  // expansion exhausted: x is numerically rational
        const double inv = 1.0 / r;
        const double af = std::floor(inv);
        // A quotient this large pushes the next denominator past the cutoff.
        if (af > 2.0 * static_cast<double>(max_denominator)) break;
        const long long a = static_cast<long long>(af);
        if (q > 0 && a > (std::numeric_limits<long long>::max() - q_prev) / q) break;
        r = inv - af;
        const long long p_next = a * p + p_prev;
        const long long q_next = a * q + q_prev;
        p_prev = p;
        q_prev = q;
        p = p_next;
        q = q_next;
    }
    return std::nullopt;
}

GapStats gap_statistics(const std::vector<CirclePoint>& points, double merge_tol) {
    if (points.size() < 2) throw std::domain_error("gap_statistics: need at least two points");
    std::vector<double> reps;
    reps.reserve(points.size());
    for (const CirclePoint& p : points) reps.push_back(p.rep());
    std::sort(reps.begin(), reps.end());

    std::vector<double> gaps;
    gaps.reserve(reps.size());
    for (std::size_t i = 0; i + 1 < reps.size(); ++i) gaps.push_back(reps[i + 1] - reps[i]);
    gaps.push_back(reps.front() + 1.0 - reps.back());  // wraparound arc
    std::sort(gaps.begin(), gaps.end());

    GapStats out;
    out.max_gap = gaps.back();
    int distinct = 1;
    for (std::size_t i = 1; i < gaps.size(); ++i)
        if (gaps[i] - gaps[i - 1] >= merge_tol) ++distinct;
    out.distinct_gap_count = distinct;
    out.sorted_gaps = std::move(gaps);
    return out;
}

int distinct_point_count(const std::vector<CirclePoint>& points, double tol) {
    if (points.empty()) throw std::domain_error("distinct_point_count: empty input");
    if (points.size() == 1) return 1;
    std::vector<double> reps;
    reps.reserve(points.size());
    for (const CirclePoint& p : points) reps.push_back(p.rep());
    std::sort(reps.begin(), reps.end());
    // Distinct values = circular arcs longer than tol (at least one for a
    // non-empty set: the wraparound arc of a singleton cluster has length 1).
    int count = 0;
    for (std::size_t i = 0; i + 1 < reps.size(); ++i)
        if (reps[i + 1] - reps[i] > tol) ++count;
    if (reps.front() + 1.0 - reps.back() > tol) ++count;
    return std::max(count, 1);
}

double star_discrepancy(const std::vector<CirclePoint>& points) {
    if (points.empty()) throw std::domain_error("star_discrepancy: empty input");
    std::vector<double> x;
    x.reserve(points.size());
    for (const CirclePoint& p : points) x.push_back(p.rep());
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    // Closed form: the sup of |F_N(t) - t| is attained at a data point,
    // approached from one side or the other.
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        d = std::max(d, x[i] - static_cast<double>(i) / n);
        d = std::max(d, static_cast<double>(i + 1) / n - x[i]);
    }
    return d;
}

}  // namespace circle
