#pragma once
/** \file skew.hpp
    Skew products F(r, [theta]) = (f(lambda, r), [theta + rotation]) of a
    one-dimensional map family with a circle rotation. The rotation increment
    is either a constant angle alpha or an r-dependent angle g(lambda, r)
    evaluated at the pre-step fiber coordinate.
*/
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "doublecircle/circle.hpp"
#include "doublecircle/map1d.hpp"

namespace skew {

/// Orbits are materialized as explicit state lists up to this cap.
inline constexpr std::size_t kMaxOrbitStates = 1'000'000;
/// Default burn-in when starting away from the attractor.
inline constexpr std::size_t kDefaultTransient = 1000;

/** The rotation layer of the skew product: either a constant angle (with its
    rationality diagnostic recorded at construction) or a function
    g(lambda, r) evaluated at the pre-step base coordinate.
*/
class RotationSpec {
public:
    /// Constant rotation by alpha; normalize(alpha) is screened for rationality.
    static RotationSpec constant(double alpha,
                                 long long max_denominator = circle::kDefaultMaxDenominator);

    /// r-dependent rotation by g(lambda, r).
    static RotationSpec variable(std::function<double(double, double)> g);

    bool is_constant() const { return constant_; }

    /// The fixed angle (constant rotations only).
    double alpha() const;

    /// Rationality screening of the constant angle, recorded at construction.
    const std::optional<circle::Rational>& alpha_diagnostic() const { return alpha_diag_; }

    /// The rotation applied when stepping from base coordinate r.
    double increment(double lambda, double r) const {
        return constant_ ? alpha_ : g_(lambda, r);
    }

private:
    RotationSpec() = default;
    bool constant_ = true;
    double alpha_ = 0.0;
    std::optional<circle::Rational> alpha_diag_;
    std::function<double(double, double)> g_;
};

/// A point of the cylinder R x S^1.
struct SkewState {
    double r = 0.0;
    circle::CirclePoint theta;
};

/// Thrown when an iterate leaves the family domain; carries the 1-based
/// count of steps applied since the orbit start and the escaping value.
struct OrbitEscaped : std::runtime_error {
    OrbitEscaped(std::size_t iterate_index, double escaped_r);
    std::size_t iterate;  ///< which application of the map produced the escape
    double r;             ///< the out-of-domain image
};

/// An immutable skew product: family, rotation layer and parameter value.
class SkewSystem {
public:
    /** Validates lambda against the family's meaningful parameter range and
        throws std::invalid_argument outside it.
    */
    SkewSystem(map1d::MapFamily family, RotationSpec rotation, double lambda);

    const map1d::MapFamily& family() const { return family_; }
    const RotationSpec& rotation() const { return rotation_; }
    double lambda() const { return lambda_; }

private:
    map1d::MapFamily family_;
    RotationSpec rotation_;
    double lambda_;
};

/** One application of the skew product. Throws OrbitEscaped (iterate = 1)
    when the base image leaves the family domain.
*/
SkewState step(const SkewSystem& sys, const SkewState& s);

/** The orbit segment of length n that starts after `transient` burn-in steps:
    the first recorded state is F^transient(s0). Escapes are propagated with
    the absolute iterate index counted from s0. n must be in [1, max_states].
*/
std::vector<SkewState> orbit(const SkewSystem& sys, const SkewState& s0, std::size_t n,
                             std::size_t transient = kDefaultTransient,
                             std::size_t max_states = kMaxOrbitStates);

/// Splits a state list into (even-index, odd-index) subsequences.
std::pair<std::vector<SkewState>, std::vector<SkewState>> split_parity(
    const std::vector<SkewState>& states);

/** The closed-form fiber orbit of the period-2 regime under a constant
    rotation: ({[2 k alpha]}, {[(2k+1) alpha]}) for k = 0 .. k_max-1. Each
    point is computed directly from its index (one rounding per point, no
    accumulation), so the union of the two lists equals {[k alpha]} for
    k < 2 k_max bit for bit.
*/
std::pair<std::vector<circle::CirclePoint>, std::vector<circle::CirclePoint>> exact_circle_orbit(
    double alpha, std::size_t k_max);

/** The net rotation of one double step along the 2-cycle: [2 alpha] for a
    constant rotation, [g(lambda, r1) + g(lambda, r2)] for a variable one.
    Returned as the canonical representative in [0,1).
*/
double double_step_rotation(const SkewSystem& sys, const map1d::TwoCycle& cyc);

/** Writes states as CSV with header "k,r,theta,x,y" (or "k,r,theta" when the
    planar embedding columns are disabled), LF line endings, reals at 17
    significant digits. k counts from k0.
*/
void write_orbit_csv(std::ostream& os, const std::vector<SkewState>& states,
                     bool with_embedding = true, std::size_t k0 = 0);

}  // namespace skew
