#pragma once
/** \file cli.hpp
    Command-line front end. Four subcommands cover the workflow:

      window           locate the period-doubling parameter window and check
                       the classical bifurcation conditions at its left edge
      verify           certify the invariant double circle for a constant
                       rotation angle
      verify-variable  the same for an r-dependent rotation g(lambda, r)
      sweep            tabulate the 2-cycle across a parameter grid as CSV

    Exit codes: 0 = everything certified / completed, 1 = configuration or
    usage error, 2 = premise failure (no cycle, no window, a check failed),
    3 = density refused because the double-step rotation is rational.
*/
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>

namespace cli {

/// (sqrt(5) - 1) / 2, the default rotation angle.
inline constexpr double kGoldenConjugate = 0.61803398874989485;

/** A parsed rotation-increment specification for verify-variable.
    Three shapes are accepted (coefficients are reals):

      const:a     g(lambda, r) = a
      affine:a,b  g(lambda, r) = a + b r
      scaled:a    g(lambda, r) = a (1 + r)
*/
struct GSpec {
    enum class Kind { Constant, Affine, Scaled };
    Kind kind = Kind::Constant;
    double a = 0.0;
    double b = 0.0;

    double eval(double lambda, double r) const;
    /// The specification as a (lambda, r) closure.
    std::function<double(double, double)> fn() const;
    /// Canonical text form, coefficients at 17 significant digits.
    std::string describe() const;
    /// Parses the text form; throws std::invalid_argument on malformed input.
    static GSpec parse(const std::string& text);
};

/// Every knob of every subcommand, with its default. Each subcommand reads
/// only the fields it documents.
struct RunConfig {
    std::string family = "logistic";
    double lambda = 3.2;          // verify / verify-variable
    double lambda_lo = 2.5;       // window / sweep
    double lambda_hi = 3.6;
    std::size_t grid = 100;       // sweep rows
    double alpha = kGoldenConjugate;
    std::string g_text;           // verify-variable rotation spec
    std::size_t n_samples = 512;
    double tol = 1e-9;            // invariance-check tolerance
    double delta = 1e-6;          // required circle separation
    double eps = 1e-3;            // epsilon-net resolution
    std::size_t k_max = 100'000;  // density-search cap
    long long max_denominator = 1'000'000;
    std::size_t n_starts = 100;   // attraction starts
    std::size_t attraction_transient = 10'000;
    double attraction_tol = 1e-6;
    double attraction_min = 0.95;
    std::uint64_t seed = 1;
    double root_tol = 1e-12;
    double window_tol = 1e-6;
    std::string out;              // report path; empty = subcommand default
    std::string orbit_out;        // optional CSV orbit dump
    std::size_t orbit_len = 1000;
    bool compact = false;         // compact JSON instead of pretty
};

int cmd_window(const RunConfig& cfg);
int cmd_verify(const RunConfig& cfg);
int cmd_verify_variable(const RunConfig& cfg);
int cmd_sweep(const RunConfig& cfg);

/// Parses argv and dispatches to the subcommand. Returns the process exit code.
int run_cli(int argc, const char* const* argv);

}  // namespace cli
