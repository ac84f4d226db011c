#pragma once

// The sivt command line: transform, verify, holder and oracle subcommands.
// Everything runs in-process through run_cli so the tests can drive it
// without spawning the binary.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sivt/expr.hpp"
#include "sivt/operators.hpp"
#include "sivt/oracles.hpp"
#include "sivt/regularity.hpp"
#include "sivt/verify.hpp"

namespace sivt::cli {

enum Exit : int { kOk = 0, kConfigError = 1, kUnconverged = 2, kCheckFailed = 2, kInternal = 3 };

/// Thrown for bad flags or inputs; maps to exit code 1.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::optional<double> tol;
    std::optional<double> margin;
    int grid = 41;
    std::string out;
    std::string format = "csv";

    void validate() const {
        if (grid < 2) throw ConfigError("--grid must be at least 2");
        if (margin && !(*margin > 0.0)) throw ConfigError("--margin must be positive");
        if (tol && !(*tol > 0.0)) throw ConfigError("--tol must be positive");
        if (format != "csv" && format != "json") throw ConfigError("--format must be csv or json");
    }

    OpConfig op_config() const {
        OpConfig c;
        if (tol) {
            c.quad.abs_tol = *tol;
            c.quad.rel_tol = *tol;
        }
        if (margin) c.margin = *margin;
        return c;
    }
};

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Reads a function file. Lines whose first non-blank character is '#' are comments.
inline FuncSpec load_function(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open function file '" + path + "'");
    std::string text, line;
    while (std::getline(in, line)) {
        const auto p = line.find_first_not_of(" \t\r");
        if (p == std::string::npos || line[p] == '#') continue;
        text += line;
        text += '\n';
    }
    if (text.empty()) throw ConfigError("function file '" + path + "' is empty");
    return parse_function(text);
}

/// Writes to --out (or the given stream when no path is set) only once the text is complete.
inline void emit(const RunConfig& rc, const std::string& text, std::ostream& out) {
    if (rc.out.empty()) {
        out << text;
        return;
    }
    std::ofstream f(rc.out, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + rc.out + "'");
    f << text;
}

inline Interval make_interval(const std::vector<double>& ab) {
    if (ab.size() != 2) throw ConfigError("--interval needs two numbers");
    if (!(ab[0] < ab[1])) throw ConfigError("--interval needs A < B");
    return Interval(ab[0], ab[1]);
}

inline std::string render_grid(const TransformGrid& g, const std::string& format) {
    std::string s;
    if (format == "csv") {
        s = "x,value,err_est\n";
        for (std::size_t i = 0; i < g.x.size(); ++i) s += fmt(g.x[i]) + "," + fmt(g.value[i]) + "," + fmt(g.err_est[i]) + "\n";
        return s;
    }
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < g.x.size(); ++i)
        arr.push_back({{"x", g.x[i]}, {"value", g.value[i]}, {"err_est", g.err_est[i]}, {"converged", bool(g.converged[i])}});
    return arr.dump(2) + "\n";
}

inline std::string render_checks(const std::vector<CheckResult>& checks, const std::string& format) {
    if (format == "csv") {
        std::string s = "check_id,status,measured,bound_or_expected,tolerance\n";
        for (const auto& c : checks)
            s += c.check_id + "," + c.status + "," + fmt(c.measured) + "," + fmt(c.bound_or_expected) + "," +
                 fmt(c.tolerance) + "\n";
        return s;
    }
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& c : checks)
        arr.push_back({{"check_id", c.check_id},
                       {"status", c.status},
                       {"measured", c.measured},
                       {"bound_or_expected", c.bound_or_expected},
                       {"tolerance", c.tolerance}});
    return arr.dump(2) + "\n";
}

inline std::string render_fit(const HolderFit& f) {
    nlohmann::ordered_json j = {{"alpha_hat", f.alpha_hat}, {"log_const", f.log_const}, {"r2", f.r2},
                                {"h_min", f.h_min},         {"h_max", f.h_max},         {"n_scales", f.n_scales}};
    return j.dump(2) + "\n";
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Singular integral transforms: evaluation and verification"};
    app.require_subcommand(1);

    RunConfig rc;
    std::string func, op = "T", suite = "all", name;
    std::vector<double> interval, scales_j;
    int k = 1;
    double at = 0.0, alpha = 0.5, x0 = 0.3, eps = 1e-4;

    auto common = [&](CLI::App* s) {
        s->add_option("--tol", rc.tol, "absolute and relative quadrature tolerance");
        s->add_option("--out", rc.out, "output path (default: standard output)");
        s->add_option("--format", rc.format, "csv or json");
    };

    CLI::App* transform = app.add_subcommand("transform", "evaluate an operator on a grid");
    transform->add_option("--func", func, "function file")->required();
    transform->add_option("--op", op, "T, Tk, finite-hilbert or hilbert");
    transform->add_option("--interval", interval, "interval A B")->expected(2)->required();
    transform->add_option("--grid", rc.grid, "number of grid points");
    transform->add_option("--margin", rc.margin, "distance of the grid from the interval ends");
    transform->add_option("--k", k, "order for Tk");
    common(transform);

    CLI::App* verify = app.add_subcommand("verify", "run the built-in verification suites");
    verify->add_option("--suite", suite, "oracles, identities, regularity, algebra or all");
    common(verify);

    CLI::App* holder = app.add_subcommand("holder", "fit the local exponent of a computed transform");
    holder->add_option("--func", func, "function file")->required();
    holder->add_option("--op", op, "T, Tk, finite-hilbert or hilbert");
    holder->add_option("--interval", interval, "interval A B")->expected(2)->required();
    holder->add_option("--at", at, "point x0")->required();
    holder->add_option("--scales", scales_j, "dyadic levels J1 J2: h = (B - A) 2^-j")->expected(2);
    holder->add_option("--k", k, "order for Tk");
    common(holder);

    CLI::App* oracle = app.add_subcommand("oracle", "evaluate a closed-form transform");
    oracle->add_option("--name", name, "semicircle, chebyshev, xalpha, shifted-xalpha or divergence")->required();
    oracle->add_option("--at", at, "evaluation point");
    oracle->add_option("--alpha", alpha, "exponent for xalpha and shifted-xalpha");
    oracle->add_option("--x0", x0, "onset for shifted-xalpha");
    oracle->add_option("--eps", eps, "excision radius for divergence");
    common(oracle);

    std::vector<std::string> args;
    for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
    try {
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "sivt: " << e.what() << "\n";
        return kConfigError;
    }

    try {
        rc.validate();
        const OpConfig cfg = rc.op_config();

        if (*transform) {
            const Interval I = make_interval(interval);
            const FuncSpec f = load_function(func);
            const TransformGrid g = transform_grid(f, I, op, rc.grid, k, cfg);
            emit(rc, render_grid(g, rc.format), out);
            if (!g.all_converged()) {
                err << "sivt: some grid points did not converge\n";
                return kUnconverged;
            }
            return kOk;
        }

        if (*verify) {
            if (suite != "all" && std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end())
                throw ConfigError("unknown suite '" + suite + "'");
            if (!verify->count("--format")) rc.format = "json";
            std::vector<CheckResult> checks;
            try {
                checks = run_suite(suite, cfg);
            } catch (const std::exception& e) {
                err << "sivt: internal failure: " << e.what() << "\n";
                return kInternal;
            }
            emit(rc, render_checks(checks, rc.format), out);
            bool all = true;
            for (const auto& c : checks) all = all && c.passed();
            return all ? kOk : kCheckFailed;
        }

        if (*holder) {
            const Interval I = make_interval(interval);
            const FuncSpec f = load_function(func);
            if (scales_j.empty()) scales_j = {6.0, 16.0};
            const int j1 = static_cast<int>(scales_j[0]), j2 = static_cast<int>(scales_j[1]);
            if (j1 != scales_j[0] || j2 != scales_j[1] || j1 < 1 || j2 <= j1)
                throw ConfigError("--scales needs integers 1 <= J1 < J2");
            const auto scales = dyadic_scales(I.length(), j1, j2);
            if (!(I.a + scales.back() < at && at + scales.back() < I.b))
                throw ConfigError("--at must be farther than the largest scale from the interval ends");
            bool converged = true;
            auto transform_at = [&](double x) {
                QuadResult r;
                if (op == "T")
                    r = apply_T(f, I, x, cfg);
                else if (op == "Tk")
                    r = apply_Tk(f, I, x, k, cfg);
                else if (op == "finite-hilbert")
                    r = finite_hilbert(f, I, x, cfg);
                else if (op == "hilbert")
                    r = global_hilbert(f, I, x, cfg);
                else
                    throw ConfigError("unknown operator '" + op + "'");
                converged = converged && r.converged;
                return r.value;
            };
            const HolderFit fit = modulus_and_fit(transform_at, at, scales, cfg.quad.abs_tol);
            emit(rc, render_fit(fit), out);
            return converged ? kOk : kUnconverged;
        }

        if (*oracle) {
            double value = 0.0;
            if (name == "semicircle")
                value = semicircle_hilbert(at);
            else if (name == "chebyshev")
                value = chebyshev_kernel_integral(at);
            else if (name == "xalpha")
                value = xalpha_finite_hilbert(at, alpha);
            else if (name == "shifted-xalpha")
                value = shifted_xalpha_finite_hilbert(at, alpha, x0);
            else if (name == "divergence")
                value = divergence_closed_form(eps);
            else
                throw ConfigError("unknown oracle '" + name + "'");
            std::string text;
            if (rc.format == "csv") {
                text = "name,at,value\n" + name + "," + fmt(name == "divergence" ? eps : at) + "," + fmt(value) + "\n";
            } else {
                nlohmann::ordered_json j = {{"name", name}, {"at", name == "divergence" ? eps : at}, {"value", value}};
                text = j.dump(2) + "\n";
            }
            emit(rc, text, out);
            return kOk;
        }
    } catch (const std::exception& e) {
        err << "sivt: " << e.what() << "\n";
        return kConfigError;
    }
    return kConfigError;
}

}  // namespace sivt::cli
