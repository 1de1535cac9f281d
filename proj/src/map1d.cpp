#include "doublecircle/map1d.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace map1d {

namespace {

constexpr int kScanCells = 4096;
constexpr double kBisectionWidth = 1e-13;
constexpr int kMaxNewtonSteps = 5;

/** Roots of g on [lo, hi]: sign-change scan over kScanCells uniform cells,
    bisection of each bracketing cell to width kBisectionWidth, then at most
    kMaxNewtonSteps Newton corrections confined to the cell (the best |g|
    point wins). Exact zeros at grid nodes are kept as roots, which also
    catches tangent roots that touch zero without crossing. Candidates within
    10 tol of each other are merged, keeping the smallest residual.
*/
std::vector<double> scan_roots(const std::function<double(double)>& g,
                               const std::function<double(double)>& dg, double lo, double hi,
                               double tol) {
    const double width = (hi - lo) / kScanCells;
    std::vector<double> candidates;

    double x0 = lo;
    double g0 = g(lo);
    for (int j = 0; j < kScanCells; ++j) {
        const double x1 = (j + 1 == kScanCells) ? hi : lo + (j + 1) * width;
        const double g1 = g(x1);
        if (g0 == 0.0) candidates.push_back(x0);
        if ((g0 < 0.0 && g1 > 0.0) || (g0 > 0.0 && g1 < 0.0)) {
            double a = x0, b = x1, ga = g0;
            while (b - a > kBisectionWidth) {
                const double m = 0.5 * (a + b);
                const double gm = g(m);
                if (gm == 0.0) {
                    a = b = m;
                    break;
                }
                if ((ga < 0.0) != (gm < 0.0))
                    b = m;
                else {
                    a = m;
                    ga = gm;
                }
            }
            double best = 0.5 * (a + b);
            double best_abs = std::fabs(g(best));
            double cur = best;
            for (int it = 0; it < kMaxNewtonSteps && best_abs > 0.0; ++it) {
                const double d = dg(cur);
                if (d == 0.0 || !std::isfinite(d)) break;
                const double next = cur - g(cur) / d;
                if (!(next >= x0 && next <= x1)) break;  // keep the safeguarded bracket
                const double v = std::fabs(g(next));
                if (v < best_abs) {
                    best = next;
                    best_abs = v;
                }
                if (next == cur) break;
                cur = next;
            }
            candidates.push_back(best);
        }
        x0 = x1;
        g0 = g1;
    }
    if (g0 == 0.0) candidates.push_back(hi);

    std::sort(candidates.begin(), candidates.end());
    std::vector<double> merged;
    for (double r : candidates) {
        if (!merged.empty() && r - merged.back() < 10.0 * tol) {
            if (std::fabs(g(r)) < std::fabs(g(merged.back()))) merged.back() = r;
            continue;
        }
        merged.push_back(r);
    }
    return merged;
}

}  // namespace

MapFamily logistic_family() {
    MapFamily fam;
    fam.name = "logistic";
    fam.domain_lo = 0.0;
    fam.domain_hi = 1.0;
    fam.lambda_lo = 0.0;
    fam.lambda_hi = 4.0;
    fam.eval = [](double lambda, double r) { return lambda * r * (1.0 - r); };
    fam.deriv = [](double lambda, double r) { return lambda * (1.0 - 2.0 * r); };
    return fam;
}

MapFamily make_family(std::string name, double domain_lo, double domain_hi,
                      std::function<double(double, double)> eval,
                      std::function<double(double, double)> deriv, double fd_step,
                      double lambda_lo, double lambda_hi) {
    if (!(domain_lo < domain_hi)) throw std::invalid_argument("make_family: empty domain");
    if (!eval) throw std::invalid_argument("make_family: eval is required");
    MapFamily fam;
    fam.name = std::move(name);
    fam.domain_lo = domain_lo;
    fam.domain_hi = domain_hi;
    fam.lambda_lo = lambda_lo;
    fam.lambda_hi = lambda_hi;
    fam.eval = std::move(eval);
    if (deriv) {
        fam.deriv = std::move(deriv);
    } else {
        auto f = fam.eval;
        fam.deriv = [f, fd_step](double lambda, double r) {
            return (f(lambda, r + fd_step) - f(lambda, r - fd_step)) / (2.0 * fd_step);
        };
    }
    return fam;
}

std::vector<double> find_fixed_points(const MapFamily& fam, double lambda, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("find_fixed_points: tol must be positive");
    auto g = [&](double r) { return fam.eval(lambda, r) - r; };
    auto dg = [&](double r) { return fam.deriv(lambda, r) - 1.0; };
    std::vector<double> roots = scan_roots(g, dg, fam.domain_lo, fam.domain_hi, tol);
    std::erase_if(roots, [&](double r) { return std::fabs(g(r)) >= tol; });
    return roots;
}

TwoCycle find_two_cycle(const MapFamily& fam, double lambda, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("find_two_cycle: tol must be positive");
    auto f = [&](double r) { return fam.eval(lambda, r); };
    auto g2 = [&](double r) { return f(f(r)) - r; };
    auto dg2 = [&](double r) { return fam.deriv(lambda, f(r)) * fam.deriv(lambda, r) - 1.0; };

    const std::vector<double> fixed = find_fixed_points(fam, lambda, tol);
    std::vector<double> roots = scan_roots(g2, dg2, fam.domain_lo, fam.domain_hi, tol);

    std::vector<double> survivors;
    for (double r : roots) {
        if (std::fabs(g2(r)) >= tol) continue;
        bool is_fixed = false;
        for (double x : fixed)
            if (std::fabs(r - x) < 10.0 * tol) {
                is_fixed = true;
                break;
            }
        if (!is_fixed) survivors.push_back(r);
    }

    // Every survivor generates a candidate cycle with its image; genuine
    // cycles must close up and keep the two points apart.
    std::vector<TwoCycle> cycles;
    for (double s : survivors) {
        const double t = f(s);
        const double r1 = std::min(s, t);
        const double r2 = std::max(s, t);
        const double residual = std::max(std::fabs(g2(s)), std::fabs(g2(t)));
        if (residual > 1e-10) continue;
        if (!(r2 - r1 > 1e-8)) continue;  // indistinguishable from a fixed point
        bool duplicate = false;
        for (TwoCycle& c : cycles)
            if (std::fabs(c.r1 - r1) < std::max(10.0 * tol, 1e-9)) {
                if (residual < c.residual) {
                    c.r1 = r1;
                    c.r2 = r2;
                    c.residual = residual;
                }
                duplicate = true;
                break;
            }
        if (duplicate) continue;
        TwoCycle c;
        c.lambda = lambda;
        c.r1 = r1;
        c.r2 = r2;
        c.residual = residual;
        cycles.push_back(c);
    }

    if (cycles.empty()) throw NoTwoCycle("find_two_cycle: no period-2 orbit at this parameter");
    for (TwoCycle& c : cycles) c.multiplier = fam.deriv(lambda, c.r1) * fam.deriv(lambda, c.r2);
    std::sort(cycles.begin(), cycles.end(),
              [](const TwoCycle& a, const TwoCycle& b) { return a.r1 < b.r1; });
    if (cycles.size() > 1)
        throw AmbiguousCycles("find_two_cycle: multiple period-2 orbits at this parameter",
                              std::move(cycles));
    return cycles.front();
}

double cycle_multiplier(const MapFamily& fam, const TwoCycle& cyc) {
    return fam.deriv(cyc.lambda, cyc.r1) * fam.deriv(cyc.lambda, cyc.r2);
}

DoublingWindow doubling_window(const MapFamily& fam, double lambda_lo, double lambda_hi,
                               double tol) {
    if (!(lambda_lo < lambda_hi))
        throw std::invalid_argument("doubling_window: need lambda_lo < lambda_hi");
    if (!(tol > 0.0)) throw std::invalid_argument("doubling_window: tol must be positive");

    auto has_cycle = [&](double lam) -> bool {
        try {
            find_two_cycle(fam, lam);
            return true;
        } catch (const AmbiguousCycles&) {
            return true;
        } catch (const NoTwoCycle&) {
            return false;
        }
    };

    // Coarse grid locates the first success; bisection sharpens the boundary.
    constexpr int kGrid = 64;
    const double step = (lambda_hi - lambda_lo) / kGrid;
    int first_true = -1;
    for (int j = 0; j <= kGrid; ++j) {
        const double lam = (j == kGrid) ? lambda_hi : lambda_lo + j * step;
        if (has_cycle(lam)) {
            first_true = j;
            break;
        }
    }
    if (first_true < 0) throw WindowNotFound("doubling_window: no 2-cycle in the given range");

    double lambda_c;
    if (first_true == 0) {
        lambda_c = lambda_lo;
    } else {
        double a = lambda_lo + (first_true - 1) * step;
        double b = (first_true == kGrid) ? lambda_hi : lambda_lo + first_true * step;
        while (b - a > 0.5 * tol) {
            const double m = 0.5 * (a + b);
            (has_cycle(m) ? b : a) = m;
        }
        lambda_c = 0.5 * (a + b);
    }

    // Destabilization: first parameter past lambda_c where |multiplier| >= 1.
    // "Not yet destabilized" covers both a still-attracting cycle and the
    // fuzzy sliver right at the tangency where the finder may not resolve it.
    auto destabilized = [&](double lam) -> bool {
        try {
            return std::fabs(find_two_cycle(fam, lam).multiplier) >= 1.0;
        } catch (const AmbiguousCycles&) {
            return false;
        } catch (const NoTwoCycle&) {
            return false;
        }
    };

    const double step0 = (lambda_hi - lambda_c) / kGrid;
    if (!(step0 > 0.0)) throw WindowNotFound("doubling_window: no room above lambda_c");
    if (destabilized(lambda_c))
        throw WindowNotFound("doubling_window: 2-cycle unstable from birth");
    int first_unstable = -1;
    for (int j = 1; j <= kGrid; ++j) {
        const double lam = (j == kGrid) ? lambda_hi : lambda_c + j * step0;
        if (destabilized(lam)) {
            first_unstable = j;
            break;
        }
    }
    if (first_unstable < 0)
        throw WindowNotFound("doubling_window: 2-cycle never destabilizes in the given range");

    double a = lambda_c + (first_unstable - 1) * step0;
    double b = (first_unstable == kGrid) ? lambda_hi : lambda_c + first_unstable * step0;
    while (b - a > 0.5 * tol) {
        const double m = 0.5 * (a + b);
        (destabilized(m) ? b : a) = m;
    }
    const double lambda_0 = 0.5 * (a + b);

    return DoublingWindow{lambda_c, lambda_0};
}

ConditionReport check_doubling_condition(const MapFamily& fam, double lambda_c, double h,
                                         const ConditionThresholds& thresholds) {
    if (!(h > 0.0)) throw std::invalid_argument("check_doubling_condition: h must be positive");

    const std::vector<double> fps = find_fixed_points(fam, lambda_c);
    if (fps.empty())
        throw NoFixedPoint("check_doubling_condition: family has no fixed point at lambda_c");

    // The doubling branch is the fixed point whose derivative sits nearest -1.
    double xs = fps.front();
    double best = std::fabs(fam.deriv(lambda_c, xs) + 1.0);
    for (double x : fps) {
        const double d = std::fabs(fam.deriv(lambda_c, x) + 1.0);
        if (d < best) {
            best = d;
            xs = x;
        }
    }

    ConditionReport rep;
    rep.fixed_point = xs;
    rep.derivative = fam.deriv(lambda_c, xs);
    rep.derivative_defect = std::fabs(rep.derivative + 1.0);
    rep.derivative_ok = rep.derivative_defect < thresholds.derivative_tol;

    // Transversality: lambda-derivative of the second-iterate multiplier
    // (f^2)'(lambda, x*(lambda)) = f'(lambda, x*(lambda))^2 along the branch.
    auto second_iterate_deriv = [&](double lam) -> double {
        const std::vector<double> pts = find_fixed_points(fam, lam);
        if (pts.empty())
            throw NoFixedPoint("check_doubling_condition: fixed-point branch lost near lambda_c");
        double x = pts.front();
        for (double p : pts)
            if (std::fabs(p - xs) < std::fabs(x - xs)) x = p;
        const double d = fam.deriv(lam, x);
        return d * d;
    };
    rep.transversality =
        (second_iterate_deriv(lambda_c + h) - second_iterate_deriv(lambda_c - h)) / (2.0 * h);
    rep.transversality_ok = std::fabs(rep.transversality) > thresholds.transversality_min;

    // Cubic nondegeneracy -2 f''' - 3 (f'')^2 at (lambda_c, x*), central
    // differences with a step wide enough to keep the third difference clean.
    const double hc = std::max(h, kHighDerivStep);
    auto fx = [&](double x) { return fam.eval(lambda_c, x); };
    const double f2 = (fx(xs + hc) - 2.0 * fx(xs) + fx(xs - hc)) / (hc * hc);
    const double f3 = (fx(xs + 2.0 * hc) - 2.0 * fx(xs + hc) + 2.0 * fx(xs - hc) -
                       fx(xs - 2.0 * hc)) /
                      (2.0 * hc * hc * hc);
    rep.nondegeneracy = -2.0 * f3 - 3.0 * f2 * f2;
    rep.nondegeneracy_ok = std::fabs(rep.nondegeneracy) > thresholds.nondegeneracy_min;

    return rep;
}

}  // namespace map1d
