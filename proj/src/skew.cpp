#include "doublecircle/skew.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "doublecircle/numfmt.hpp"

namespace skew {

RotationSpec RotationSpec::constant(double alpha, long long max_denominator) {
    if (!std::isfinite(alpha))
        throw std::invalid_argument("RotationSpec: alpha must be finite");
    RotationSpec spec;
    spec.constant_ = true;
    spec.alpha_ = alpha;
    const double a = circle::normalize(alpha).rep();
    if (a == 0.0)
        spec.alpha_diag_ = circle::Rational{0, 1};  // whole turns: trivially rational
    else
        spec.alpha_diag_ = circle::rationality_diagnostic(a, max_denominator);
    return spec;
}

RotationSpec RotationSpec::variable(std::function<double(double, double)> g) {
    if (!g) throw std::invalid_argument("RotationSpec: g is required");
    RotationSpec spec;
    spec.constant_ = false;
    spec.g_ = std::move(g);
    return spec;
}

double RotationSpec::alpha() const {
    if (!constant_) throw std::logic_error("RotationSpec: alpha() on a variable rotation");
    return alpha_;
}

OrbitEscaped::OrbitEscaped(std::size_t iterate_index, double escaped_r)
    : std::runtime_error("orbit escaped the family domain at iterate " +
                         std::to_string(iterate_index) + " (r = " + numfmt::real17(escaped_r) +
                         ")"),
      iterate(iterate_index),
      r(escaped_r) {}

SkewSystem::SkewSystem(map1d::MapFamily family, RotationSpec rotation, double lambda)
    : family_(std::move(family)), rotation_(std::move(rotation)), lambda_(lambda) {
    if (!std::isfinite(lambda) || lambda < family_.lambda_lo || lambda > family_.lambda_hi)
        throw std::invalid_argument("SkewSystem: lambda outside the family parameter range");
}

SkewState step(const SkewSystem& sys, const SkewState& s) {
    const double rn = sys.family().eval(sys.lambda(), s.r);
    if (!(rn >= sys.family().domain_lo && rn <= sys.family().domain_hi))
        throw OrbitEscaped(1, rn);
    // The rotation increment is taken at the pre-step base coordinate.
    const double inc = sys.rotation().increment(sys.lambda(), s.r);
    return SkewState{rn, circle::rotate(s.theta, inc)};
}

std::vector<SkewState> orbit(const SkewSystem& sys, const SkewState& s0, std::size_t n,
                             std::size_t transient, std::size_t max_states) {
    if (n == 0) throw std::invalid_argument("orbit: n must be >= 1");
    if (n > max_states) throw std::invalid_argument("orbit: n exceeds the orbit state cap");

    SkewState s = s0;
    std::size_t applied = 0;
    auto advance = [&]() {
        try {
            s = step(sys, s);
            ++applied;
        } catch (const OrbitEscaped& e) {
            throw OrbitEscaped(applied + e.iterate, e.r);
        }
    };

    for (std::size_t i = 0; i < transient; ++i) advance();

    std::vector<SkewState> out;
    out.reserve(n);
    out.push_back(s);
    for (std::size_t i = 1; i < n; ++i) {
        advance();
        out.push_back(s);
    }
    return out;
}

std::pair<std::vector<SkewState>, std::vector<SkewState>> split_parity(
    const std::vector<SkewState>& states) {
    std::vector<SkewState> even, odd;
    even.reserve((states.size() + 1) / 2);
    odd.reserve(states.size() / 2);
    for (std::size_t i = 0; i < states.size(); ++i)
        (i % 2 == 0 ? even : odd).push_back(states[i]);
    return {std::move(even), std::move(odd)};
}

std::pair<std::vector<circle::CirclePoint>, std::vector<circle::CirclePoint>> exact_circle_orbit(
    double alpha, std::size_t k_max) {
    if (k_max == 0) throw std::invalid_argument("exact_circle_orbit: k_max must be >= 1");
    if (!std::isfinite(alpha))
        throw std::invalid_argument("exact_circle_orbit: alpha must be finite");
    std::vector<circle::CirclePoint> even, odd;
    even.reserve(k_max);
    odd.reserve(k_max);
    for (std::size_t k = 0; k < k_max; ++k) {
        // (2k) alpha and (2k+1) alpha with a single rounding each: the integer
        // coefficient is exact in double well past any realistic k_max.
        const double kk = 2.0 * static_cast<double>(k);
        even.push_back(circle::normalize(kk * alpha));
        odd.push_back(circle::normalize((kk + 1.0) * alpha));
    }
    return {std::move(even), std::move(odd)};
}

double double_step_rotation(const SkewSystem& sys, const map1d::TwoCycle& cyc) {
    if (sys.rotation().is_constant())
        return circle::normalize(2.0 * sys.rotation().alpha()).rep();
    const double g1 = sys.rotation().increment(sys.lambda(), cyc.r1);
    const double g2 = sys.rotation().increment(sys.lambda(), cyc.r2);
    return circle::normalize(g1 + g2).rep();
}

void write_orbit_csv(std::ostream& os, const std::vector<SkewState>& states, bool with_embedding,
                     std::size_t k0) {
    os << (with_embedding ? "k,r,theta,x,y\n" : "k,r,theta\n");
    for (std::size_t i = 0; i < states.size(); ++i) {
        const SkewState& s = states[i];
        os << (k0 + i) << ',' << numfmt::real17(s.r) << ',' << numfmt::real17(s.theta.rep());
        if (with_embedding) {
            const auto [x, y] = circle::embed(s.theta);
            os << ',' << numfmt::real17(x) << ',' << numfmt::real17(y);
        }
        os << '\n';
    }
}

}  // namespace skew
