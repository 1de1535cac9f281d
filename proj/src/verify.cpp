#include "doublecircle/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <utility>

#include "doublecircle/numfmt.hpp"

namespace verify {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Equispaced fiber point j/n.
circle::CirclePoint fiber_sample(std::size_t j, std::size_t n) {
    return circle::normalize(static_cast<double>(j) / static_cast<double>(n));
}

/// Largest circular gap left by the points (1 when fewer than two points).
double max_circular_gap(const std::vector<circle::CirclePoint>& points) {
    if (points.size() < 2) return 1.0;
    return circle::gap_statistics(points).max_gap;
}

}  // namespace

RationalRotation::RationalRotation(double rotation_value, circle::Rational approximation,
                                   int points_gamma1, int points_gamma2)
    : std::runtime_error("double-step rotation " + numfmt::real17(rotation_value) +
                         " is rational " + std::to_string(approximation.p) + "/" +
                         std::to_string(approximation.q) +
                         " at the working resolution; each fiber class is confined to "
                         "finitely many points (" +
                         std::to_string(points_gamma1) + " on the first circle, " +
                         std::to_string(points_gamma2) + " on the second)"),
      rotation(rotation_value),
      approx(approximation),
      distinct_gamma1(points_gamma1),
      distinct_gamma2(points_gamma2) {}

std::optional<circle::Rational> angle_rationality(double rep, long long max_denominator) {
    if (!(rep >= 0.0 && rep < 1.0))
        throw std::invalid_argument("angle_rationality: expected a canonical representative");
    if (rep == 0.0) return circle::Rational{0, 1};
    return circle::rationality_diagnostic(rep, max_denominator);
}

EpsilonNetResult epsilon_net_check(const std::vector<circle::CirclePoint>& points, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("epsilon_net_check: eps must be positive");
    const double gap = max_circular_gap(points);
    return {gap < eps, gap, eps};
}

DisjointnessResult disjointness_check(const map1d::TwoCycle& cyc, double delta) {
    if (!(delta >= 0.0)) throw std::invalid_argument("disjointness_check: delta must be >= 0");
    const double margin = cyc.r2 - cyc.r1;  // r1 < r2 by construction
    return {margin > delta, margin, delta};
}

SwapInvarianceResult swap_invariance_check(const skew::SkewSystem& sys,
                                           const map1d::TwoCycle& cyc, std::size_t n_samples,
                                           double tol) {
    if (n_samples < 2)
        throw std::invalid_argument("swap_invariance_check: need at least 2 samples");
    if (!(tol > 0.0)) throw std::invalid_argument("swap_invariance_check: tol must be positive");

    auto direction = [&](double src, double dst) {
        SwapCheck c;

        // Forward inclusion: every fiber point of the source circle must map
        // to the destination r-level.
        double worst = 0.0;
        bool ok = true;
        for (std::size_t j = 0; j < n_samples; ++j) {
            try {
                const skew::SkewState img = skew::step(sys, {src, fiber_sample(j, n_samples)});
                worst = std::max(worst, std::fabs(img.r - dst));
            } catch (const skew::OrbitEscaped&) {
                ok = false;
                worst = kInf;
                break;
            }
        }
        c.forward_max_r_dev = worst;
        c.forward_passed = ok && worst <= tol;

        // Surjectivity, constructively: the rotation increment is constant
        // along the source fiber, so rotating a target backwards by it gives
        // the unique preimage candidate, which stepping must send back onto
        // the target.
        const double inc = sys.rotation().increment(sys.lambda(), src);
        worst = 0.0;
        ok = true;
        for (std::size_t j = 0; j < n_samples; ++j) {
            const circle::CirclePoint target = fiber_sample(j, n_samples);
            try {
                const skew::SkewState img =
                    skew::step(sys, {src, circle::rotate(target, -inc)});
                const double dev =
                    std::max(std::fabs(img.r - dst), circle::dist(img.theta, target));
                worst = std::max(worst, dev);
            } catch (const skew::OrbitEscaped&) {
                ok = false;
                worst = kInf;
                break;
            }
        }
        c.surjective_max_dev = worst;
        c.surjective_passed = ok && worst <= tol;
        return c;
    };

    SwapInvarianceResult res;
    res.gamma1_to_gamma2 = direction(cyc.r1, cyc.r2);
    res.gamma2_to_gamma1 = direction(cyc.r2, cyc.r1);
    return res;
}

UnionInvarianceResult union_invariance_check(const skew::SkewSystem& sys,
                                             const map1d::TwoCycle& cyc, std::size_t n_samples,
                                             double tol) {
    if (n_samples < 2)
        throw std::invalid_argument("union_invariance_check: need at least 2 samples");
    if (!(tol > 0.0)) throw std::invalid_argument("union_invariance_check: tol must be positive");

    // Forward containment: images of both circles must stay at one of the
    // two r-levels.
    double worst = 0.0;
    bool ok = true;
    for (double level : {cyc.r1, cyc.r2}) {
        for (std::size_t j = 0; j < n_samples && ok; ++j) {
            try {
                const skew::SkewState img = skew::step(sys, {level, fiber_sample(j, n_samples)});
                worst = std::max(worst,
                                 std::min(std::fabs(img.r - cyc.r1), std::fabs(img.r - cyc.r2)));
            } catch (const skew::OrbitEscaped&) {
                ok = false;
                worst = kInf;
            }
        }
    }

    // Onto-ness of the union map comes from the two swap directions.
    const SwapInvarianceResult swap = swap_invariance_check(sys, cyc, n_samples, tol);
    return {ok && worst <= tol && swap.passed(), worst};
}

F2InvarianceResult f2_invariance_check(const skew::SkewSystem& sys, const map1d::TwoCycle& cyc,
                                       std::size_t n_samples, double tol) {
    if (n_samples < 1)
        throw std::invalid_argument("f2_invariance_check: need at least 1 sample");
    if (!(tol > 0.0)) throw std::invalid_argument("f2_invariance_check: tol must be positive");

    const double expected = skew::double_step_rotation(sys, cyc);

    auto one_circle = [&](double level) {
        F2CircleCheck c;
        double worst_r = 0.0;
        double worst_theta = 0.0;
        bool ok = true;
        for (std::size_t j = 0; j < n_samples; ++j) {
            const circle::CirclePoint theta = fiber_sample(j, n_samples);
            skew::SkewState s2;
            try {
                s2 = skew::step(sys, skew::step(sys, {level, theta}));
            } catch (const skew::OrbitEscaped&) {
                ok = false;
                worst_r = worst_theta = kInf;
                break;
            }
            worst_r = std::max(worst_r, std::fabs(s2.r - level));
            worst_theta =
                std::max(worst_theta, circle::dist(s2.theta, circle::rotate(theta, expected)));
            if (j == 0) c.theta_step = circle::normalize(s2.theta.rep() - theta.rep()).rep();
        }
        c.max_r_dev = worst_r;
        c.max_theta_dev = worst_theta;
        c.passed = ok && worst_r <= tol && worst_theta <= tol;
        return c;
    };

    F2InvarianceResult res;
    res.gamma1 = one_circle(cyc.r1);
    res.gamma2 = one_circle(cyc.r2);
    res.expected_theta_step = expected;
    return res;
}

F2SwapAsPrinted f2_swap_as_printed_check(const skew::SkewSystem& sys, const map1d::TwoCycle& cyc,
                                         std::size_t n_samples, double tol) {
    if (n_samples < 1)
        throw std::invalid_argument("f2_swap_as_printed_check: need at least 1 sample");
    F2SwapAsPrinted out;
    double worst = 0.0;
    bool ok = true;
    for (std::size_t j = 0; j < n_samples; ++j) {
        try {
            const skew::SkewState s2 =
                skew::step(sys, skew::step(sys, {cyc.r1, fiber_sample(j, n_samples)}));
            worst = std::max(worst, std::fabs(s2.r - cyc.r2));
        } catch (const skew::OrbitEscaped&) {
            ok = false;
            worst = kInf;
            break;
        }
    }
    out.max_r_dev = worst;
    out.holds = ok && worst <= tol;
    return out;
}

std::pair<InvariantCircle, InvariantCircle> attribute_orbit(
    const std::vector<skew::SkewState>& states, const map1d::TwoCycle& cyc, double attr_tol) {
    if (states.empty()) throw std::invalid_argument("attribute_orbit: empty orbit");

    const auto [even, odd] = skew::split_parity(states);

    // The even-index subsequence sits on whichever circle the orbit started
    // on; the odd one on the other.
    const double head = even.front().r;
    const bool even_is_r1 = std::fabs(head - cyc.r1) <= std::fabs(head - cyc.r2);
    const double even_level = even_is_r1 ? cyc.r1 : cyc.r2;
    const double odd_level = even_is_r1 ? cyc.r2 : cyc.r1;

    auto collect = [&](const std::vector<skew::SkewState>& part, double level) {
        InvariantCircle c;
        c.r_level = level;
        c.samples.reserve(part.size());
        for (const skew::SkewState& s : part) {
            if (std::fabs(s.r - level) > attr_tol)
                throw std::runtime_error("attribute_orbit: state at r = " + numfmt::real17(s.r) +
                                         " strays from its circle level " +
                                         numfmt::real17(level));
            c.samples.push_back(s.theta);
        }
        return c;
    };

    InvariantCircle even_circle = collect(even, even_level);
    InvariantCircle odd_circle = collect(odd, odd_level);
    if (even_is_r1) return {std::move(even_circle), std::move(odd_circle)};
    return {std::move(odd_circle), std::move(even_circle)};
}

namespace {

/// The fiber nets of both circles at k points each, for the orbit started
/// at (r1, [0]). Constant rotations use the closed-form points; variable
/// ones measure a simulated orbit.
std::pair<std::vector<circle::CirclePoint>, std::vector<circle::CirclePoint>> fiber_nets(
    const skew::SkewSystem& sys, const map1d::TwoCycle& cyc, std::size_t k) {
    if (sys.rotation().is_constant())
        return skew::exact_circle_orbit(sys.rotation().alpha(), k);
    const std::size_t n = 2 * k;
    const std::vector<skew::SkewState> states =
        skew::orbit(sys, {cyc.r1, circle::normalize(0.0)}, n, /*transient=*/0,
                    std::max(skew::kMaxOrbitStates, n));
    auto [c1, c2] = attribute_orbit(states, cyc);
    return {std::move(c1.samples), std::move(c2.samples)};
}

}  // namespace

DensityResult density_certificate(const skew::SkewSystem& sys, const map1d::TwoCycle& cyc,
                                  double eps, std::size_t k_max, long long max_denominator) {
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("density_certificate: eps must lie in (0,1)");
    if (k_max < 2) throw std::invalid_argument("density_certificate: k_max must be >= 2");

    // A rational double-step rotation p/q confines each fiber class to at
    // most q points, whose best possible net has gaps >= 1/q. When even that
    // cannot reach eps, no amount of iteration helps: report the obstruction.
    const double rot = skew::double_step_rotation(sys, cyc);
    const std::optional<circle::Rational> diag = angle_rationality(rot, max_denominator);
    if (diag && static_cast<double>(diag->q) * eps <= 1.0) {
        const std::size_t m =
            std::min<std::size_t>(std::max<std::size_t>(2 * static_cast<std::size_t>(diag->q), 8),
                                  4096);
        const auto [pts1, pts2] = fiber_nets(sys, cyc, m);
        throw RationalRotation(rot, *diag, circle::distinct_point_count(pts1),
                               circle::distinct_point_count(pts2));
    }

    DensityResult out;
    out.gamma1.eps = out.gamma2.eps = eps;
    bool done1 = false;
    bool done2 = false;

    std::size_t k = std::min<std::size_t>(2, k_max);
    while (true) {
        const auto [pts1, pts2] = fiber_nets(sys, cyc, k);
        auto finalize = [&](DensityCircleReport& rep,
                            const std::vector<circle::CirclePoint>& pts, bool& done) {
            if (done) return;
            const circle::GapStats gs = circle::gap_statistics(pts);
            const bool passed = gs.max_gap < eps;
            if (passed || k >= k_max) {
                rep.passed = passed;
                rep.achieved_k = k;
                rep.points = pts.size();
                rep.max_gap = gs.max_gap;
                rep.distinct_gap_count = gs.distinct_gap_count;
                rep.star_discrepancy = circle::star_discrepancy(pts);
                done = true;
            }
        };
        finalize(out.gamma1, pts1, done1);
        finalize(out.gamma2, pts2, done2);
        if ((done1 && done2) || k >= k_max) break;
        k = (k > k_max / 2) ? k_max : 2 * k;
    }
    return out;
}

AttractionResult attraction_check(const skew::SkewSystem& sys, const map1d::TwoCycle& cyc,
                                  std::size_t n_starts, std::size_t transient, double tol,
                                  std::uint64_t seed,
                                  std::optional<std::pair<double, double>> draw_range) {
    if (n_starts < 1) throw std::invalid_argument("attraction_check: need at least 1 start");
    if (!(tol >= 0.0)) throw std::invalid_argument("attraction_check: tol must be >= 0");

    const map1d::MapFamily& fam = sys.family();
    const auto [lo, hi] = draw_range.value_or(std::pair{fam.domain_lo, fam.domain_hi});
    if (!(lo <= hi)) throw std::invalid_argument("attraction_check: empty draw range");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> draw_r(lo, hi);
    std::uniform_real_distribution<double> draw_theta(0.0, 1.0);

    std::size_t converged = 0;
    for (std::size_t i = 0; i < n_starts; ++i) {
        const double r0 = draw_r(rng);
        const double theta0 = draw_theta(rng);
        skew::SkewState s{r0, circle::normalize(theta0)};
        bool alive = true;
        try {
            for (std::size_t t = 0; t < transient; ++t) s = skew::step(sys, s);
        } catch (const skew::OrbitEscaped&) {
            alive = false;  // left the domain: counts against attraction
        }
        if (alive &&
            std::min(std::fabs(s.r - cyc.r1), std::fabs(s.r - cyc.r2)) <= tol)
            ++converged;
    }

    AttractionResult res;
    res.fraction = static_cast<double>(converged) / static_cast<double>(n_starts);
    res.n_starts = n_starts;
    res.converged = converged;
    res.transient = transient;
    res.tol = tol;
    res.seed = seed;
    return res;
}

bool VerificationReport::compute_all_passed() const {
    auto density_ok = [](const DensitySection& s) {
        return !s.rational_rotation && s.report.passed;
    };
    return disjoint.passed && swap.passed() && f2.passed() && union_inv.passed &&
           density_ok(density_gamma1) && density_ok(density_gamma2) && attraction_passed;
}

namespace {

jsonout::Value rational_json(const std::optional<circle::Rational>& r) {
    if (!r) return jsonout::Value();
    jsonout::Value v = jsonout::Value::object();
    v.set("p", jsonout::Value(r->p));
    v.set("q", jsonout::Value(r->q));
    return v;
}

jsonout::Value swap_json(const SwapCheck& c) {
    jsonout::Value v = jsonout::Value::object();
    v.set("passed", jsonout::Value(c.passed()));
    v.set("landing_passed", jsonout::Value(c.forward_passed));
    v.set("landing_max_r_dev", jsonout::Value(c.forward_max_r_dev));
    v.set("preimage_passed", jsonout::Value(c.surjective_passed));
    v.set("preimage_max_dev", jsonout::Value(c.surjective_max_dev));
    return v;
}

jsonout::Value f2_json(const F2CircleCheck& c, double expected) {
    jsonout::Value v = jsonout::Value::object();
    v.set("passed", jsonout::Value(c.passed));
    v.set("max_r_dev", jsonout::Value(c.max_r_dev));
    v.set("max_theta_dev", jsonout::Value(c.max_theta_dev));
    v.set("theta_step", jsonout::Value(c.theta_step));
    v.set("expected_theta_step", jsonout::Value(expected));
    return v;
}

jsonout::Value density_json(const DensitySection& s) {
    jsonout::Value v = jsonout::Value::object();
    if (s.rational_rotation) {
        v.set("passed", jsonout::Value(false));
        v.set("rational_rotation", jsonout::Value(true));
        v.set("p", jsonout::Value(s.approx.p));
        v.set("q", jsonout::Value(s.approx.q));
        v.set("distinct_points", jsonout::Value(s.distinct_points));
        return v;
    }
    v.set("passed", jsonout::Value(s.report.passed));
    v.set("rational_rotation", jsonout::Value(false));
    v.set("eps", jsonout::Value(s.report.eps));
    v.set("achieved_k", jsonout::Value(static_cast<long long>(s.report.achieved_k)));
    v.set("points", jsonout::Value(static_cast<long long>(s.report.points)));
    v.set("max_gap", jsonout::Value(s.report.max_gap));
    v.set("distinct_gap_count", jsonout::Value(s.report.distinct_gap_count));
    v.set("star_discrepancy", jsonout::Value(s.report.star_discrepancy));
    return v;
}

}  // namespace

jsonout::Value report_to_json(const VerificationReport& rep) {
    jsonout::Value root = jsonout::Value::object();
    root.set("schema_version", jsonout::Value(1));
    root.set("kind", jsonout::Value(rep.kind));
    root.set("family", jsonout::Value(rep.family));
    root.set("lambda", jsonout::Value(rep.lambda));

    jsonout::Value rot = jsonout::Value::object();
    rot.set("type", jsonout::Value(rep.rotation.constant ? "constant" : "variable"));
    if (rep.rotation.constant) {
        rot.set("alpha", jsonout::Value(rep.rotation.alpha));
        rot.set("alpha_rational", rational_json(rep.rotation.alpha_diag));
    } else {
        rot.set("g", jsonout::Value(rep.rotation.g_desc));
        rot.set("g_at_r1", jsonout::Value(rep.rotation.g_r1));
        rot.set("g_at_r1_rational", rational_json(rep.rotation.g_r1_diag));
        rot.set("g_at_r2", jsonout::Value(rep.rotation.g_r2));
        rot.set("g_at_r2_rational", rational_json(rep.rotation.g_r2_diag));
    }
    rot.set("double_step", jsonout::Value(rep.rotation.double_step));
    rot.set("double_step_rational", rational_json(rep.rotation.double_step_diag));
    root.set("rotation", std::move(rot));

    jsonout::Value cyc = jsonout::Value::object();
    cyc.set("lambda", jsonout::Value(rep.cycle.lambda));
    cyc.set("r1", jsonout::Value(rep.cycle.r1));
    cyc.set("r2", jsonout::Value(rep.cycle.r2));
    cyc.set("multiplier", jsonout::Value(rep.cycle.multiplier));
    cyc.set("residual", jsonout::Value(rep.cycle.residual));
    root.set("cycle", std::move(cyc));

    jsonout::Value params = jsonout::Value::object();
    params.set("n_samples", jsonout::Value(static_cast<long long>(rep.params.n_samples)));
    params.set("tol", jsonout::Value(rep.params.tol));
    params.set("delta", jsonout::Value(rep.params.delta));
    params.set("eps", jsonout::Value(rep.params.eps));
    params.set("k_max", jsonout::Value(static_cast<long long>(rep.params.k_max)));
    params.set("max_denominator", jsonout::Value(rep.params.max_denominator));
    params.set("attraction_starts",
               jsonout::Value(static_cast<long long>(rep.params.attraction_starts)));
    params.set("attraction_transient",
               jsonout::Value(static_cast<long long>(rep.params.attraction_transient)));
    params.set("attraction_tol", jsonout::Value(rep.params.attraction_tol));
    params.set("attraction_min", jsonout::Value(rep.params.attraction_min));
    params.set("seed", jsonout::Value(static_cast<unsigned long long>(rep.params.seed)));
    root.set("params", std::move(params));

    jsonout::Value checks = jsonout::Value::object();

    jsonout::Value disj = jsonout::Value::object();
    disj.set("passed", jsonout::Value(rep.disjoint.passed));
    disj.set("margin", jsonout::Value(rep.disjoint.margin));
    disj.set("delta", jsonout::Value(rep.disjoint.delta));
    checks.set("disjoint", std::move(disj));

    checks.set("swap_forward", swap_json(rep.swap.gamma1_to_gamma2));
    checks.set("swap_backward", swap_json(rep.swap.gamma2_to_gamma1));
    checks.set("f2_gamma1", f2_json(rep.f2.gamma1, rep.f2.expected_theta_step));
    checks.set("f2_gamma2", f2_json(rep.f2.gamma2, rep.f2.expected_theta_step));

    jsonout::Value uni = jsonout::Value::object();
    uni.set("passed", jsonout::Value(rep.union_inv.passed));
    uni.set("margin", jsonout::Value(rep.union_inv.margin));
    uni.set("tol", jsonout::Value(rep.params.tol));
    checks.set("union_invariant", std::move(uni));

    checks.set("density_gamma1", density_json(rep.density_gamma1));
    checks.set("density_gamma2", density_json(rep.density_gamma2));

    jsonout::Value attr = jsonout::Value::object();
    attr.set("passed", jsonout::Value(rep.attraction_passed));
    attr.set("fraction", jsonout::Value(rep.attraction.fraction));
    attr.set("converged", jsonout::Value(static_cast<long long>(rep.attraction.converged)));
    attr.set("n_starts", jsonout::Value(static_cast<long long>(rep.attraction.n_starts)));
    attr.set("transient", jsonout::Value(static_cast<long long>(rep.attraction.transient)));
    attr.set("tol", jsonout::Value(rep.attraction.tol));
    attr.set("required_min", jsonout::Value(rep.params.attraction_min));
    attr.set("seed", jsonout::Value(static_cast<unsigned long long>(rep.attraction.seed)));
    checks.set("attraction", std::move(attr));

    root.set("checks", std::move(checks));

    if (rep.f2_swap_printed) {
        jsonout::Value printed = jsonout::Value::object();
        printed.set("holds", jsonout::Value(rep.f2_swap_printed->holds));
        printed.set("max_r_dev", jsonout::Value(rep.f2_swap_printed->max_r_dev));
        root.set("f2_swap_as_printed", std::move(printed));
    }

    root.set("all_passed", jsonout::Value(rep.all_passed));
    return root;
}

}  // namespace verify
