#include "doublecircle/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "doublecircle/circle.hpp"
#include "doublecircle/jsonout.hpp"
#include "doublecircle/map1d.hpp"
#include "doublecircle/numfmt.hpp"
#include "doublecircle/skew.hpp"
#include "doublecircle/verify.hpp"

namespace cli {

namespace {

/// Compact rendering for the human-readable summary lines.
std::string fmt6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return std::string(buf);
}

std::string status_tag(bool ok) { return ok ? "[ok]  " : "[FAIL]"; }

map1d::MapFamily family_by_name(const std::string& name) {
    if (name == "logistic") return map1d::logistic_family();
    throw std::invalid_argument("unknown family '" + name + "' (available: logistic)");
}

/// Serializes a document; pretty output already ends in a newline, compact
/// output gets one appended so files always end with LF.
std::string doc_string(const jsonout::Value& doc, bool compact) {
    std::string s = doc.dump(!compact);
    if (s.empty() || s.back() != '\n') s += '\n';
    return s;
}

bool write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) return false;
    f << content;
    return static_cast<bool>(f);
}

}  // namespace

double GSpec::eval(double lambda, double r) const {
    (void)lambda;  // the accepted shapes depend on r only
    switch (kind) {
        case Kind::Constant: return a;
        case Kind::Affine: return a + b * r;
        case Kind::Scaled: return a * (1.0 + r);
    }
    return a;  // unreachable
}

std::function<double(double, double)> GSpec::fn() const {
    return [spec = *this](double lambda, double r) { return spec.eval(lambda, r); };
}

std::string GSpec::describe() const {
    switch (kind) {
        case Kind::Constant: return "const:" + numfmt::real17(a);
        case Kind::Affine: return "affine:" + numfmt::real17(a) + "," + numfmt::real17(b);
        case Kind::Scaled: return "scaled:" + numfmt::real17(a);
    }
    return std::string();  // unreachable
}

GSpec GSpec::parse(const std::string& text) {
    const std::size_t colon = text.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("rotation spec '" + text +
                                    "': expected kind:coefficients (const:a | affine:a,b | "
                                    "scaled:a)");
    const std::string kind = text.substr(0, colon);
    const std::string args = text.substr(colon + 1);

    std::vector<std::string> parts;
    std::size_t begin = 0;
    while (true) {
        const std::size_t comma = args.find(',', begin);
        if (comma == std::string::npos) {
            parts.push_back(args.substr(begin));
            break;
        }
        parts.push_back(args.substr(begin, comma - begin));
        begin = comma + 1;
    }

    auto parse_real = [&](const std::string& s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("rotation spec '" + text + "': bad coefficient '" + s +
                                        "'");
        }
        if (used != s.size() || !std::isfinite(v))
            throw std::invalid_argument("rotation spec '" + text + "': bad coefficient '" + s +
                                        "'");
        return v;
    };

    auto need = [&](std::size_t n) {
        if (parts.size() != n)
            throw std::invalid_argument("rotation spec '" + text + "': '" + kind + "' takes " +
                                        std::to_string(n) +
                                        (n == 1 ? " coefficient" : " coefficients"));
    };

    GSpec g;
    if (kind == "const") {
        need(1);
        g.kind = Kind::Constant;
        g.a = parse_real(parts[0]);
    } else if (kind == "affine") {
        need(2);
        g.kind = Kind::Affine;
        g.a = parse_real(parts[0]);
        g.b = parse_real(parts[1]);
    } else if (kind == "scaled") {
        need(1);
        g.kind = Kind::Scaled;
        g.a = parse_real(parts[0]);
    } else {
        throw std::invalid_argument("rotation spec '" + text + "': unknown kind '" + kind +
                                    "' (const | affine | scaled)");
    }
    return g;
}

int cmd_window(const RunConfig& cfg) {
    try {
        const map1d::MapFamily fam = family_by_name(cfg.family);

        map1d::DoublingWindow win{};
        try {
            win = map1d::doubling_window(fam, cfg.lambda_lo, cfg.lambda_hi, cfg.window_tol);
        } catch (const map1d::WindowNotFound& e) {
            std::cerr << "window: " << e.what() << "\n";
            return 2;
        }

        map1d::ConditionReport cond{};
        try {
            cond = map1d::check_doubling_condition(fam, win.lambda_c);
        } catch (const map1d::NoFixedPoint& e) {
            std::cerr << "window: " << e.what() << "\n";
            return 2;
        }
        const bool all = cond.passed();

        jsonout::Value doc = jsonout::Value::object();
        doc.set("schema_version", jsonout::Value(1));
        doc.set("kind", jsonout::Value("window"));
        doc.set("family", jsonout::Value(fam.name));
        doc.set("lambda_lo", jsonout::Value(cfg.lambda_lo));
        doc.set("lambda_hi", jsonout::Value(cfg.lambda_hi));
        doc.set("window_tol", jsonout::Value(cfg.window_tol));
        doc.set("lambda_c", jsonout::Value(win.lambda_c));
        doc.set("lambda_0", jsonout::Value(win.lambda_0));
        jsonout::Value cj = jsonout::Value::object();
        cj.set("fixed_point", jsonout::Value(cond.fixed_point));
        cj.set("derivative", jsonout::Value(cond.derivative));
        cj.set("derivative_defect", jsonout::Value(cond.derivative_defect));
        cj.set("derivative_ok", jsonout::Value(cond.derivative_ok));
        cj.set("transversality", jsonout::Value(cond.transversality));
        cj.set("transversality_ok", jsonout::Value(cond.transversality_ok));
        cj.set("nondegeneracy", jsonout::Value(cond.nondegeneracy));
        cj.set("nondegeneracy_ok", jsonout::Value(cond.nondegeneracy_ok));
        cj.set("passed", jsonout::Value(all));
        doc.set("condition", std::move(cj));
        doc.set("all_passed", jsonout::Value(all));

        const std::string path = cfg.out.empty() ? "window_report.json" : cfg.out;
        if (!write_text_file(path, doc_string(doc, cfg.compact))) {
            std::cerr << "window: cannot write '" << path << "'\n";
            return 1;
        }

        std::cout << "window: lambda_c = " << numfmt::real17(win.lambda_c)
                  << ", lambda_0 = " << numfmt::real17(win.lambda_0) << " (tol "
                  << fmt6(cfg.window_tol) << ")\n";
        std::cout << "condition at lambda_c: derivative " << status_tag(cond.derivative_ok)
                  << " f' = " << fmt6(cond.derivative) << ", transversality "
                  << status_tag(cond.transversality_ok) << " " << fmt6(cond.transversality)
                  << ", nondegeneracy " << status_tag(cond.nondegeneracy_ok) << " "
                  << fmt6(cond.nondegeneracy) << "\n";
        std::cout << "report: " << path << "\n";
        return all ? 0 : 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "window: " << e.what() << "\n";
        return 1;
    }
}

namespace {

void print_density_line(const char* label, const verify::DensitySection& s) {
    if (s.rational_rotation) {
        std::cout << status_tag(false) << " " << label << "  double-step rotation rational "
                  << s.approx.p << "/" << s.approx.q << ": " << s.distinct_points
                  << " distinct fiber points\n";
        return;
    }
    std::cout << status_tag(s.report.passed) << " " << label << "  max gap "
              << fmt6(s.report.max_gap) << " with " << s.report.points << " points (eps "
              << fmt6(s.report.eps) << ")\n";
}

int run_verify(const RunConfig& cfg, bool variable) {
    const char* cmd = variable ? "verify-variable" : "verify";
    try {
        const map1d::MapFamily fam = family_by_name(cfg.family);

        GSpec g;
        if (variable) g = GSpec::parse(cfg.g_text);

        map1d::TwoCycle cyc{};
        try {
            cyc = map1d::find_two_cycle(fam, cfg.lambda, cfg.root_tol);
        } catch (const map1d::NoTwoCycle& e) {
            std::cerr << cmd << ": " << e.what() << "\n";
            return 2;
        } catch (const map1d::AmbiguousCycles& e) {
            std::cerr << cmd << ": " << e.what() << "\n";
            return 2;
        }

        const skew::RotationSpec rot =
            variable ? skew::RotationSpec::variable(g.fn())
                     : skew::RotationSpec::constant(cfg.alpha, cfg.max_denominator);
        const skew::SkewSystem sys(fam, rot, cfg.lambda);

        verify::VerificationReport rep;
        rep.kind = cmd;
        rep.family = fam.name;
        rep.lambda = cfg.lambda;
        rep.cycle = cyc;
        rep.params.n_samples = cfg.n_samples;
        rep.params.tol = cfg.tol;
        rep.params.delta = cfg.delta;
        rep.params.eps = cfg.eps;
        rep.params.k_max = cfg.k_max;
        rep.params.max_denominator = cfg.max_denominator;
        rep.params.attraction_starts = cfg.n_starts;
        rep.params.attraction_transient = cfg.attraction_transient;
        rep.params.attraction_tol = cfg.attraction_tol;
        rep.params.attraction_min = cfg.attraction_min;
        rep.params.seed = cfg.seed;

        const double dstep = skew::double_step_rotation(sys, cyc);
        rep.rotation.constant = !variable;
        rep.rotation.double_step = dstep;
        rep.rotation.double_step_diag = verify::angle_rationality(dstep, cfg.max_denominator);
        if (variable) {
            rep.rotation.g_desc = g.describe();
            rep.rotation.g_r1 = g.eval(cfg.lambda, cyc.r1);
            rep.rotation.g_r2 = g.eval(cfg.lambda, cyc.r2);
            rep.rotation.g_r1_diag = verify::angle_rationality(
                circle::normalize(rep.rotation.g_r1).rep(), cfg.max_denominator);
            rep.rotation.g_r2_diag = verify::angle_rationality(
                circle::normalize(rep.rotation.g_r2).rep(), cfg.max_denominator);
        } else {
            rep.rotation.alpha = cfg.alpha;
            rep.rotation.alpha_diag = sys.rotation().alpha_diagnostic();
        }

        rep.disjoint = verify::disjointness_check(cyc, cfg.delta);
        rep.swap = verify::swap_invariance_check(sys, cyc, cfg.n_samples, cfg.tol);
        rep.f2 = verify::f2_invariance_check(sys, cyc, cfg.n_samples, cfg.tol);
        rep.union_inv = verify::union_invariance_check(sys, cyc, cfg.n_samples, cfg.tol);
        rep.attraction = verify::attraction_check(sys, cyc, cfg.n_starts,
                                                  cfg.attraction_transient, cfg.attraction_tol,
                                                  cfg.seed);
        rep.attraction_passed = rep.attraction.fraction >= cfg.attraction_min;
        if (variable)
            rep.f2_swap_printed =
                verify::f2_swap_as_printed_check(sys, cyc, cfg.n_samples, cfg.tol);

        bool rational = false;
        try {
            const verify::DensityResult den =
                verify::density_certificate(sys, cyc, cfg.eps, cfg.k_max, cfg.max_denominator);
            rep.density_gamma1.report = den.gamma1;
            rep.density_gamma2.report = den.gamma2;
        } catch (const verify::RationalRotation& e) {
            rational = true;
            rep.density_gamma1.rational_rotation = true;
            rep.density_gamma1.approx = e.approx;
            rep.density_gamma1.distinct_points = e.distinct_gamma1;
            rep.density_gamma2.rational_rotation = true;
            rep.density_gamma2.approx = e.approx;
            rep.density_gamma2.distinct_points = e.distinct_gamma2;
        }
        rep.all_passed = rep.compute_all_passed();

        const std::string path =
            cfg.out.empty() ? (variable ? "variable_report.json" : "verify_report.json")
                            : cfg.out;
        if (!write_text_file(path, doc_string(verify::report_to_json(rep), cfg.compact))) {
            std::cerr << cmd << ": cannot write '" << path << "'\n";
            return 1;
        }

        if (!cfg.orbit_out.empty()) {
            try {
                const std::vector<skew::SkewState> states =
                    skew::orbit(sys, {cyc.r1, circle::normalize(0.0)}, cfg.orbit_len,
                                /*transient=*/0);
                std::ofstream f(cfg.orbit_out, std::ios::binary);
                if (!f) {
                    std::cerr << cmd << ": cannot write '" << cfg.orbit_out << "'\n";
                    return 1;
                }
                skew::write_orbit_csv(f, states);
                if (!f) {
                    std::cerr << cmd << ": cannot write '" << cfg.orbit_out << "'\n";
                    return 1;
                }
            } catch (const skew::OrbitEscaped& e) {
                std::cerr << cmd << ": orbit dump skipped: " << e.what() << "\n";
            }
        }

        std::cout << "two-cycle at lambda = " << numfmt::real17(cfg.lambda)
                  << ": r1 = " << numfmt::real17(cyc.r1) << ", r2 = " << numfmt::real17(cyc.r2)
                  << ", multiplier = " << fmt6(cyc.multiplier) << "\n";
        std::cout << status_tag(rep.disjoint.passed) << " disjoint     margin "
                  << fmt6(rep.disjoint.margin) << " > delta " << fmt6(rep.disjoint.delta)
                  << "\n";
        std::cout << status_tag(rep.swap.passed()) << " swap         landing "
                  << fmt6(std::max(rep.swap.gamma1_to_gamma2.forward_max_r_dev,
                                   rep.swap.gamma2_to_gamma1.forward_max_r_dev))
                  << " / preimage "
                  << fmt6(std::max(rep.swap.gamma1_to_gamma2.surjective_max_dev,
                                   rep.swap.gamma2_to_gamma1.surjective_max_dev))
                  << "\n";
        std::cout << status_tag(rep.f2.passed()) << " f2           r dev "
                  << fmt6(std::max(rep.f2.gamma1.max_r_dev, rep.f2.gamma2.max_r_dev))
                  << ", theta dev "
                  << fmt6(std::max(rep.f2.gamma1.max_theta_dev, rep.f2.gamma2.max_theta_dev))
                  << " (step " << fmt6(rep.f2.expected_theta_step) << ")\n";
        std::cout << status_tag(rep.union_inv.passed) << " union        margin "
                  << fmt6(rep.union_inv.margin) << "\n";
        std::cout << status_tag(rep.attraction_passed) << " attraction   fraction "
                  << fmt6(rep.attraction.fraction) << " >= " << fmt6(cfg.attraction_min) << " ("
                  << rep.attraction.converged << "/" << rep.attraction.n_starts << ")\n";
        print_density_line("density g1", rep.density_gamma1);
        print_density_line("density g2", rep.density_gamma2);
        if (rep.f2_swap_printed)
            std::cout << "note: literal double-step swap " << (rep.f2_swap_printed->holds
                          ? "holds"
                          : "does not hold (as expected for disjoint circles)")
                      << ", max r dev " << fmt6(rep.f2_swap_printed->max_r_dev) << "\n";
        std::cout << (rep.all_passed ? "all checks passed" : "NOT certified") << "; report: "
                  << path << "\n";

        if (rational) return 3;
        return rep.all_passed ? 0 : 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << cmd << ": " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

int cmd_verify(const RunConfig& cfg) { return run_verify(cfg, /*variable=*/false); }

int cmd_verify_variable(const RunConfig& cfg) { return run_verify(cfg, /*variable=*/true); }

int cmd_sweep(const RunConfig& cfg) {
    try {
        const map1d::MapFamily fam = family_by_name(cfg.family);
        if (cfg.grid < 1) throw std::invalid_argument("grid must be >= 1");
        if (!(cfg.lambda_lo <= cfg.lambda_hi))
            throw std::invalid_argument("lambda_lo must not exceed lambda_hi");

        const std::string path = cfg.out.empty() ? "sweep.csv" : cfg.out;
        std::ofstream f(path, std::ios::binary);
        if (!f) {
            std::cerr << "sweep: cannot write '" << path << "'\n";
            return 1;
        }
        f << "lambda,r1,r2,multiplier,margin,status\n";

        std::size_t n_ok = 0, n_unstable = 0, n_none = 0, n_ambiguous = 0;
        for (std::size_t i = 0; i < cfg.grid; ++i) {
            const double lam =
                cfg.grid == 1
                    ? cfg.lambda_lo
                    : cfg.lambda_lo + (cfg.lambda_hi - cfg.lambda_lo) *
                                          (static_cast<double>(i) /
                                           static_cast<double>(cfg.grid - 1));
            std::string row = numfmt::real17(lam);
            try {
                const map1d::TwoCycle cyc = map1d::find_two_cycle(fam, lam, cfg.root_tol);
                const bool stable = std::fabs(cyc.multiplier) < 1.0;
                (stable ? n_ok : n_unstable) += 1;
                row += "," + numfmt::real17(cyc.r1) + "," + numfmt::real17(cyc.r2) + "," +
                       numfmt::real17(cyc.multiplier) + "," + numfmt::real17(cyc.r2 - cyc.r1) +
                       (stable ? ",ok" : ",unstable");
            } catch (const map1d::NoTwoCycle&) {
                ++n_none;
                row += ",,,,,no-cycle";
            } catch (const map1d::AmbiguousCycles&) {
                ++n_ambiguous;
                row += ",,,,,ambiguous";
            }
            f << row << "\n";
        }
        if (!f) {
            std::cerr << "sweep: cannot write '" << path << "'\n";
            return 1;
        }

        std::cout << "sweep: " << cfg.grid << " rows -> " << path << " (ok " << n_ok
                  << ", unstable " << n_unstable << ", no-cycle " << n_none << ", ambiguous "
                  << n_ambiguous << ")\n";
        return 0;
    } catch (const std::invalid_argument& e) {
        std::cerr << "sweep: " << e.what() << "\n";
        return 1;
    }
}

int run_cli(int argc, const char* const* argv) {
    CLI::App app{
        "Skew products over a period-doubled interval map: locate the doubling window, "
        "certify the invariant double circle, tabulate the 2-cycle."};
    app.require_subcommand(1);
    app.set_config("--config", "", "read options from a config file");

    RunConfig cfg;
    int rc = 0;

    auto add_family = [&](CLI::App* c) {
        c->add_option("--family", cfg.family, "map family")->capture_default_str();
    };
    auto add_report = [&](CLI::App* c, const char* def) {
        c->add_option("--out", cfg.out, std::string("report path (default ") + def + ")");
        c->add_flag("--compact", cfg.compact, "compact JSON instead of pretty-printed");
    };
    auto add_range = [&](CLI::App* c) {
        c->add_option("--lambda-lo", cfg.lambda_lo, "lower end of the parameter range")
            ->capture_default_str();
        c->add_option("--lambda-hi", cfg.lambda_hi, "upper end of the parameter range")
            ->capture_default_str();
    };
    auto add_checks = [&](CLI::App* c) {
        c->add_option("--lambda", cfg.lambda, "parameter value")->capture_default_str();
        c->add_option("--n-samples", cfg.n_samples, "fiber samples per circle")
            ->capture_default_str();
        c->add_option("--tol", cfg.tol, "invariance-check tolerance")->capture_default_str();
        c->add_option("--delta", cfg.delta, "required circle separation")
            ->capture_default_str();
        c->add_option("--eps", cfg.eps, "epsilon-net resolution")->capture_default_str();
        c->add_option("--k-max", cfg.k_max, "density point cap per circle")
            ->capture_default_str();
        c->add_option("--max-denominator", cfg.max_denominator,
                      "rationality screening cutoff")
            ->capture_default_str();
        c->add_option("--n-starts", cfg.n_starts, "attraction test starts")
            ->capture_default_str();
        c->add_option("--transient", cfg.attraction_transient, "attraction burn-in steps")
            ->capture_default_str();
        c->add_option("--attraction-tol", cfg.attraction_tol,
                      "distance to a circle that counts as converged")
            ->capture_default_str();
        c->add_option("--attraction-min", cfg.attraction_min,
                      "required fraction of converging starts")
            ->capture_default_str();
        c->add_option("--seed", cfg.seed, "random seed for the attraction test")
            ->capture_default_str();
        c->add_option("--root-tol", cfg.root_tol, "root-finder residual tolerance")
            ->capture_default_str();
        c->add_option("--orbit-out", cfg.orbit_out, "also dump an orbit CSV to this path");
        c->add_option("--orbit-len", cfg.orbit_len, "orbit dump length")
            ->capture_default_str();
    };

    CLI::App* w = app.add_subcommand("window",
                                     "locate the period-doubling window and check the "
                                     "bifurcation conditions at its left edge");
    add_family(w);
    add_range(w);
    w->add_option("--window-tol", cfg.window_tol, "window boundary tolerance")
        ->capture_default_str();
    add_report(w, "window_report.json");
    w->callback([&] { rc = cmd_window(cfg); });

    CLI::App* v = app.add_subcommand(
        "verify", "certify the invariant double circle for a constant rotation");
    add_family(v);
    v->add_option("--alpha", cfg.alpha, "constant rotation angle")->capture_default_str();
    add_checks(v);
    add_report(v, "verify_report.json");
    v->callback([&] { rc = cmd_verify(cfg); });

    CLI::App* vv = app.add_subcommand(
        "verify-variable", "certify the invariant double circle for an r-dependent rotation");
    add_family(vv);
    vv->add_option("--g", cfg.g_text, "rotation spec: const:a | affine:a,b | scaled:a")
        ->required();
    add_checks(vv);
    add_report(vv, "variable_report.json");
    vv->callback([&] { rc = cmd_verify_variable(cfg); });

    CLI::App* s =
        app.add_subcommand("sweep", "tabulate the 2-cycle across a parameter grid as CSV");
    add_family(s);
    add_range(s);
    s->add_option("--grid", cfg.grid, "number of grid rows")->capture_default_str();
    s->add_option("--root-tol", cfg.root_tol, "root-finder residual tolerance")
        ->capture_default_str();
    s->add_option("--out", cfg.out, "CSV path (default sweep.csv)");
    s->callback([&] { rc = cmd_sweep(cfg); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    return rc;
}

}  // namespace cli
