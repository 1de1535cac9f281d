#pragma once
/** \file verify.hpp
    Numerical certificates for the invariant double circle of a skew product
    in its period-doubled regime. Given a 2-cycle {r1, r2} of the base map,
    the candidate invariant set is Gamma^1 u Gamma^2 with Gamma^i = {ri} x S^1,
    and the checks certify, at explicit tolerances:

      - disjointness of the two circles,
      - the swap F(Gamma^1) = Gamma^2 and F(Gamma^2) = Gamma^1 (forward
        inclusion plus constructive surjectivity via rotation preimages),
      - invariance of the union and of each circle under the double step F^2,
      - density of the fiber orbit on each circle (epsilon-net certificates,
        with a rationality guard on the double-step rotation),
      - attraction of randomly seeded orbits to the double circle.
*/
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "doublecircle/circle.hpp"
#include "doublecircle/jsonout.hpp"
#include "doublecircle/map1d.hpp"
#include "doublecircle/skew.hpp"

namespace verify {

inline constexpr std::size_t kDefaultSamples = 512;     ///< fiber samples per circle
inline constexpr double kDefaultCheckTol = 1e-9;        ///< invariance-check tolerance
inline constexpr double kDefaultEps = 1e-3;             ///< epsilon-net resolution
inline constexpr std::size_t kDefaultKMax = 100'000;    ///< density-search cap per circle
inline constexpr double kDefaultDisjointDelta = 1e-6;   ///< required circle separation
inline constexpr std::size_t kDefaultAttractionStarts = 100;
inline constexpr std::size_t kDefaultAttractionTransient = 10'000;
inline constexpr double kDefaultAttractionTol = 1e-6;
inline constexpr double kDefaultAttractionMin = 0.95;   ///< required converging fraction
inline constexpr double kDefaultAttributionTol = 1e-8;  ///< orbit-to-circle assignment slack

/// One of the two candidate circles with fiber samples attributed to it.
struct InvariantCircle {
    double r_level = 0.0;
    std::vector<circle::CirclePoint> samples;
};

/// Outcome of an epsilon-net coverage test.
struct EpsilonNetResult {
    bool passed = false;
    double max_gap = 0.0;
    double eps = 0.0;
};

/// Outcome of the circle-separation test.
struct DisjointnessResult {
    bool passed = false;
    double margin = 0.0;  ///< |r1 - r2|
    double delta = 0.0;   ///< required separation
};

/// One direction of the swap test (source circle -> destination circle).
struct SwapCheck {
    bool forward_passed = false;       ///< images of the source land at the destination level
    double forward_max_r_dev = 0.0;    ///< worst |image r - destination level|
    bool surjective_passed = false;    ///< rotation preimages hit equispaced targets
    double surjective_max_dev = 0.0;   ///< worst of r-deviation and fiber distance to target
    bool passed() const { return forward_passed && surjective_passed; }
};

/// Both directions of the swap test.
struct SwapInvarianceResult {
    SwapCheck gamma1_to_gamma2;
    SwapCheck gamma2_to_gamma1;
    bool passed() const { return gamma1_to_gamma2.passed() && gamma2_to_gamma1.passed(); }
};

/// Double-step invariance of one circle.
struct F2CircleCheck {
    bool passed = false;
    double max_r_dev = 0.0;      ///< worst |F^2 image r - level|
    double max_theta_dev = 0.0;  ///< worst fiber distance from the expected rigid rotation
    double theta_step = 0.0;     ///< measured fiber displacement of one double step
};

/// Double-step invariance of both circles.
struct F2InvarianceResult {
    F2CircleCheck gamma1;
    F2CircleCheck gamma2;
    double expected_theta_step = 0.0;  ///< double_step_rotation of the system
    bool passed() const { return gamma1.passed && gamma2.passed; }
};

/// Invariance of the union Gamma^1 u Gamma^2 under one step.
struct UnionInvarianceResult {
    bool passed = false;
    double margin = 0.0;  ///< worst distance of an image r to the set {r1, r2}
};

/// Density certificate for one circle.
struct DensityCircleReport {
    bool passed = false;
    double eps = 0.0;
    std::size_t achieved_k = 0;  ///< smallest tested point count meeting eps (k_max when failed)
    std::size_t points = 0;      ///< points in the final net
    double max_gap = 0.0;
    int distinct_gap_count = 0;
    double star_discrepancy = 0.0;
};

/// Density certificates for both circles.
struct DensityResult {
    DensityCircleReport gamma1;
    DensityCircleReport gamma2;
    bool passed() const { return gamma1.passed && gamma2.passed; }
};

/** Thrown by density_certificate when the double-step rotation is rational
    with period q too small for any epsilon-net at the requested resolution:
    each parity class then consists of finitely many points forever.
*/
class RationalRotation : public std::runtime_error {
public:
    RationalRotation(double rotation_value, circle::Rational approximation, int points_gamma1,
                     int points_gamma2);
    double rotation;             ///< the double-step rotation in [0,1)
    circle::Rational approx;     ///< the flagged rational p/q
    int distinct_gamma1;         ///< measured distinct fiber points on Gamma^1
    int distinct_gamma2;         ///< measured distinct fiber points on Gamma^2
};

/// Outcome of the random-start attraction test.
struct AttractionResult {
    double fraction = 0.0;  ///< share of starts ending within tol of {r1, r2}
    std::size_t n_starts = 0;
    std::size_t converged = 0;
    std::size_t transient = 0;
    double tol = 0.0;
    std::uint64_t seed = 0;
};

/** Rationality screening extended to the whole canonical range [0,1): an
    angle of exactly 0 is the rational 0/1; anything else is delegated to
    circle::rationality_diagnostic. rep must be a canonical representative.
*/
std::optional<circle::Rational> angle_rationality(
    double rep, long long max_denominator = circle::kDefaultMaxDenominator);

/// Coverage test: do the points leave no circular gap of length >= eps?
EpsilonNetResult epsilon_net_check(const std::vector<circle::CirclePoint>& points, double eps);

/// Separation test: |r1 - r2| must exceed delta.
DisjointnessResult disjointness_check(const map1d::TwoCycle& cyc,
                                      double delta = kDefaultDisjointDelta);

/** Swap test with n_samples equispaced fiber points per circle: forward
    images of Gamma^1 must land on Gamma^2 within tol (and vice versa), and
    every equispaced target on the destination circle must be hit by stepping
    its rotation preimage on the source circle. Failures are reported, not
    thrown. n_samples must be >= 2.
*/
SwapInvarianceResult swap_invariance_check(const skew::SkewSystem& sys,
                                           const map1d::TwoCycle& cyc,
                                           std::size_t n_samples = kDefaultSamples,
                                           double tol = kDefaultCheckTol);

/** Union-invariance test: every sampled point of Gamma^1 u Gamma^2 must map
    within tol (in r) of {r1, r2}, and both swap directions must pass.
*/
UnionInvarianceResult union_invariance_check(const skew::SkewSystem& sys,
                                             const map1d::TwoCycle& cyc,
                                             std::size_t n_samples = kDefaultSamples,
                                             double tol = kDefaultCheckTol);

/** Double-step test: F^2 must fix each circle and act on its fiber as the
    rigid rotation by double_step_rotation, within tol. n_samples >= 1.
*/
F2InvarianceResult f2_invariance_check(const skew::SkewSystem& sys, const map1d::TwoCycle& cyc,
                                       std::size_t n_samples = kDefaultSamples,
                                       double tol = kDefaultCheckTol);

/** Density certificate per circle: grows the fiber net by doubling the point
    count until the epsilon-net check passes or k_max is reached, and reports
    the final gap statistics and star discrepancy. Constant rotations use the
    closed-form fiber orbit; variable rotations measure fiber subsequences of
    a simulated orbit started on the cycle (parity attribution is enforced
    within kDefaultAttributionTol). Throws RationalRotation when the
    double-step rotation is flagged rational with period q <= 1/eps.
*/
DensityResult density_certificate(const skew::SkewSystem& sys, const map1d::TwoCycle& cyc,
                                  double eps = kDefaultEps, std::size_t k_max = kDefaultKMax,
                                  long long max_denominator = circle::kDefaultMaxDenominator);

/** Attraction test: n_starts states with r uniform in the draw range (the
    family domain by default) and theta uniform on the circle are iterated
    `transient` steps; a start converges when its final r lies within tol of
    r1 or r2. Escaping orbits count as non-converging. Fully deterministic
    given the seed.
*/
AttractionResult attraction_check(const skew::SkewSystem& sys, const map1d::TwoCycle& cyc,
                                  std::size_t n_starts = kDefaultAttractionStarts,
                                  std::size_t transient = kDefaultAttractionTransient,
                                  double tol = kDefaultAttractionTol, std::uint64_t seed = 1,
                                  std::optional<std::pair<double, double>> draw_range = {});

/** Splits an orbit into the two parity subsequences and attributes each to
    its circle (the even class belongs to the cycle point nearest the first
    state). Throws std::runtime_error if any state strays further than
    attr_tol from its circle's r-level.
*/
std::pair<InvariantCircle, InvariantCircle> attribute_orbit(
    const std::vector<skew::SkewState>& states, const map1d::TwoCycle& cyc,
    double attr_tol = kDefaultAttributionTol);

/// How a density section ended up: a real net, or the rational short-circuit.
struct DensitySection {
    bool rational_rotation = false;
    circle::Rational approx{};   ///< set when rational_rotation
    int distinct_points = 0;     ///< set when rational_rotation
    DensityCircleReport report;  ///< set otherwise
};

/// Extra diagnostic for variable rotations: the literal double-step swap
/// statement F^2(Gamma^1) c Gamma^2, reported for visibility (it is expected
/// to fail whenever the circles are disjoint, since F^2 fixes each circle).
struct F2SwapAsPrinted {
    bool holds = false;
    double max_r_dev = 0.0;  ///< worst |F^2 image r - swapped level|
};

/// Evaluates the literal double-step swap statement on Gamma^1. Reported for
/// visibility only; it never gates a certificate.
F2SwapAsPrinted f2_swap_as_printed_check(const skew::SkewSystem& sys, const map1d::TwoCycle& cyc,
                                         std::size_t n_samples = kDefaultSamples,
                                         double tol = kDefaultCheckTol);

/// Echo of the knobs a certificate ran with (serialized into the report).
struct ReportParams {
    std::size_t n_samples = kDefaultSamples;
    double tol = kDefaultCheckTol;
    double delta = kDefaultDisjointDelta;
    double eps = kDefaultEps;
    std::size_t k_max = kDefaultKMax;
    long long max_denominator = circle::kDefaultMaxDenominator;
    std::size_t attraction_starts = kDefaultAttractionStarts;
    std::size_t attraction_transient = kDefaultAttractionTransient;
    double attraction_tol = kDefaultAttractionTol;
    double attraction_min = kDefaultAttractionMin;
    std::uint64_t seed = 1;
};

/// Description of the rotation layer for the report.
struct RotationInfo {
    bool constant = true;
    double alpha = 0.0;                              ///< constant case
    std::optional<circle::Rational> alpha_diag;      ///< constant case
    std::string g_desc;                              ///< variable case: "kind:coefficients"
    double g_r1 = 0.0, g_r2 = 0.0;                   ///< variable case: g on the cycle
    std::optional<circle::Rational> g_r1_diag, g_r2_diag;
    double double_step = 0.0;                        ///< double-step rotation in [0,1)
    std::optional<circle::Rational> double_step_diag;
};

/** The complete certificate for one system: every check outcome plus the
    configuration that produced it. Serialized with schema_version 1.
*/
struct VerificationReport {
    std::string kind;    ///< "verify" or "verify-variable"
    std::string family;
    double lambda = 0.0;
    RotationInfo rotation;
    map1d::TwoCycle cycle;
    ReportParams params;
    DisjointnessResult disjoint;
    SwapInvarianceResult swap;
    F2InvarianceResult f2;
    UnionInvarianceResult union_inv;
    DensitySection density_gamma1;
    DensitySection density_gamma2;
    AttractionResult attraction;
    bool attraction_passed = false;
    std::optional<F2SwapAsPrinted> f2_swap_printed;  ///< variable rotations only
    bool all_passed = false;

    /// Recomputes all_passed from the member results.
    bool compute_all_passed() const;
};

/// The report as an ordered JSON document (schema_version 1, reals at 17
/// significant digits, pass/fail booleans with sibling margin fields).
jsonout::Value report_to_json(const VerificationReport& rep);

}  // namespace verify
