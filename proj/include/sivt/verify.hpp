#pragma once

// Built-in verification suites. Each check compares a computed quantity with
// a closed form, a bound, or an independently computed value.

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "sivt/corpus.hpp"
#include "sivt/operators.hpp"
#include "sivt/oracles.hpp"
#include "sivt/regularity.hpp"

namespace sivt {

struct CheckResult {
    std::string check_id;
    std::string status;  // "pass", "fail" or "unconverged"
    double measured = 0.0;
    double bound_or_expected = 0.0;
    double tolerance = 0.0;

    bool passed() const { return status == "pass"; }
};

class CheckList {
public:
    /// |measured - expected| <= tol.
    void expect(std::string id, double measured, double expected, double tol, bool converged = true) {
        const bool ok = std::fabs(measured - expected) <= tol;
        push(std::move(id), ok, converged, measured, expected, tol);
    }

    /// measured <= bound + tol.
    void at_most(std::string id, double measured, double bound, double tol = 0.0, bool converged = true) {
        const bool ok = measured <= bound + tol;
        push(std::move(id), ok, converged, measured, bound, tol);
    }

    /// measured >= bound - tol.
    void at_least(std::string id, double measured, double bound, double tol = 0.0, bool converged = true) {
        const bool ok = measured >= bound - tol;
        push(std::move(id), ok, converged, measured, bound, tol);
    }

    std::vector<CheckResult> take() { return std::move(results_); }

private:
    void push(std::string id, bool ok, bool converged, double measured, double bound, double tol) {
        // NaN never passes.
        if (std::isnan(measured)) ok = false;
        const char* status = ok ? "pass" : (converged ? "fail" : "unconverged");
        results_.push_back({std::move(id), status, measured, bound, tol});
    }

    std::vector<CheckResult> results_;
};

namespace detail {

/// Tracks the worst |value| over a set of items together with convergence.
struct Worst {
    double value = 0.0;
    bool converged = true;

    void add(double v, bool conv = true) {
        if (std::isnan(v) || std::fabs(v) > value) value = std::isnan(v) ? v : std::fabs(v);
        converged = converged && conv;
    }
};

inline std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / (n - 1);
    return out;
}

}  // namespace detail

inline std::vector<CheckResult> verify_oracles(const OpConfig& cfg = {}) {
    CheckList out;
    const double pi = std::numbers::pi;

    // Semicircle: interior branch through the finite transform, exterior through the global one.
    {
        const FuncSpec semi = corpus::semicircle();
        const Interval S(-1.0, 1.0);
        detail::Worst w;
        for (int i = -9; i <= 9; ++i) {
            const double x = 0.1 * i;
            const QuadResult r = finite_hilbert(semi, S, x, cfg);
            w.add(r.value - semicircle_hilbert(x), r.converged);
        }
        out.at_most("oracles.semicircle.finite_interior", w.value, 1e-5, 0.0, w.converged);
        detail::Worst g;
        for (double x : {-3.0, -2.0, -1.5, 1.5, 2.0, 3.0}) {
            const QuadResult r = global_hilbert(semi, S, x, cfg);
            g.add(r.value - semicircle_hilbert(x), r.converged);
        }
        out.at_most("oracles.semicircle.global_exterior", g.value, 1e-6, 0.0, g.converged);
        const QuadResult shifted = global_hilbert(semi, Interval(1.0, 3.0), 2.0, cfg);
        out.expect("oracles.semicircle.core_1_3_at_2", shifted.value, 2.0 - std::sqrt(3.0), 1e-6, shifted.converged);
        out.expect("oracles.semicircle.closed_form_at_1", semicircle_hilbert(1.0), 1.0, 0.0);
        out.expect("oracles.semicircle.closed_form_at_-1", semicircle_hilbert(-1.0), -1.0, 0.0);
    }

    // Chebyshev weight.
    {
        auto w = [](double t) { return 1.0 / std::sqrt(1.0 - t * t); };
        const Interval S(-1.0, 1.0);
        const PvHints hints{-0.5, -0.5, 0.0};
        detail::Worst in;
        for (double x : {-0.9, -0.75, -0.5, -0.25, 0.25, 0.5, 0.75, 0.9}) {
            const QuadResult r = pv_cauchy(w, S, x, cfg.quad, hints);
            in.add(r.value - chebyshev_kernel_integral(x), r.converged);
        }
        out.at_most("oracles.chebyshev.pv_interior", in.value, 1e-6, 0.0, in.converged);
        detail::Worst ex;
        for (double x : {-2.0, -1.5, 1.5, 2.0}) {
            auto k = [&](double t) { return w(t) / (x - t); };
            const QuadResult r = integrate_endpoint_singular(k, -1.0, 1.0, -0.5, -0.5, cfg.quad);
            ex.add(r.value - chebyshev_kernel_integral(x), r.converged);
        }
        out.at_most("oracles.chebyshev.direct_exterior", ex.value, 1e-8, 0.0, ex.converged);
        auto k = [&](double t) { return w(t) / (-2.0 - t); };
        const QuadResult neg = integrate_endpoint_singular(k, -1.0, 1.0, -0.5, -0.5, cfg.quad);
        out.expect("oracles.chebyshev.negative_branch", neg.value, -pi / std::sqrt(3.0), 1e-8, neg.converged);
    }

    // x^alpha and its shifted variant.
    {
        detail::Worst direct, shifted, overlap;
        for (double a : {0.25, 0.5, 0.75}) {
            const GSeriesState st(a);
            const FuncSpec f = corpus::xalpha(a);
            const FuncSpec fs = corpus::shifted_power(0.3, a);
            for (double x : {0.1, 0.2, 0.3, 0.4}) {
                const QuadResult r = finite_hilbert(f, Interval(0.0, 1.0), x, cfg);
                direct.add(xalpha_finite_hilbert(x, st) - r.value, r.converged);
                const QuadResult rs = finite_hilbert(fs, Interval(0.0, 1.0), x, cfg);
                shifted.add(shifted_xalpha_finite_hilbert(x, st, 0.3) - rs.value, rs.converged);
            }
            for (double x : detail::linspace(0.3, 0.45, 7))
                overlap.add(xalpha_finite_hilbert(x, st) - xalpha_finite_hilbert_quadrature(x, st));
        }
        out.at_most("oracles.xalpha.series_vs_transform", direct.value, 1e-5, 0.0, direct.converged);
        out.at_most("oracles.xalpha.shifted_vs_transform", shifted.value, 1e-5, 0.0, shifted.converged);
        out.at_most("oracles.xalpha.series_vs_relation_overlap", overlap.value, 1e-6);
        out.expect("oracles.xalpha.limit_at_0", xalpha_finite_hilbert(1e-12, 0.5), -2.0 / pi, 1e-6);
        out.expect("oracles.xalpha.shifted_at_x0", shifted_xalpha_finite_hilbert(0.3, 0.5, 0.3),
                   -std::sqrt(0.7) / (pi * 0.5), 1e-15);
    }

    // Logarithmic blow-up of the C^1 counterexample.
    {
        detail::Worst closed;
        std::vector<double> lx, ly;
        for (int j = 4; j <= 13; ++j) {
            const double eps = std::pow(10.0, -j);
            const QuadResult r = divergence_probe(eps);
            closed.add(r.value - divergence_closed_form(eps), r.converged);
            if (j <= 12) {
                lx.push_back(std::log(std::log(1.0 / eps)));
                ly.push_back(r.value);
            }
        }
        out.at_most("oracles.divergence.quadrature_vs_closed_form", closed.value, 1e-9, 0.0, closed.converged);
        double mx = 0.0, my = 0.0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            mx += lx[i] / lx.size();
            my += ly[i] / ly.size();
        }
        double sxx = 0.0, sxy = 0.0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            sxx += (lx[i] - mx) * (lx[i] - mx);
            sxy += (lx[i] - mx) * (ly[i] - my);
        }
        out.expect("oracles.divergence.slope", sxy / sxx, 2.0 / pi, 0.02 * 2.0 / pi);
        const FuncSpec g = corpus::log_counterexample();
        const QuadResult ex = pv_cauchy_excision([&](double y) { return g(y); }, Interval(-0.25, 0.25), 0.0, cfg.quad);
        out.expect("oracles.divergence.excision_flags_divergence", ex.diverged ? 1.0 : 0.0, 1.0, 0.0);
    }
    return out.take();
}

inline std::vector<CheckResult> verify_identities(const OpConfig& cfg = {}) {
    CheckList out;
    const Interval U(0.0, 1.0);

    // Derivatives of Tf against T_k f.
    {
        struct Case {
            std::string name;
            FuncSpec f;
            Interval I;
        };
        const std::vector<Case> cases = {
            {"y2", corpus::monomial(2), U},
            {"y3", corpus::monomial(3), U},
            {"semicircle_restricted", corpus::semicircle_restricted(), Interval(-0.9, 0.9)},
        };
        for (const Case& c : cases) {
            const auto grid = detail::linspace(c.I.a + 0.1 * c.I.length(), c.I.b - 0.1 * c.I.length(), 9);
            for (int k = 1; k <= 3; ++k) {
                const ProbeReport rep = dk_Tf_check(c.f, c.I, grid, k, cfg);
                out.at_most("identities.dk_Tf." + c.name + ".k" + std::to_string(k), rep.max_measured(), 1e-4);
            }
        }
    }

    // T_{k+1} f against T_k f' for y^3: the uncorrected identity is off by the boundary term.
    {
        const FuncSpec y3 = corpus::monomial(3);
        detail::Worst t2, t1, res;
        double disc = 0.0, boundary = 0.0;
        for (double x : {0.1, 0.3, 0.5, 0.7, 0.9}) {
            const ProbeReport rep = recursion_discrepancy(y3, U, x, 1, cfg);
            t2.add(rep.find("T_{k+1} f")->measured - 2.0);
            t1.add(rep.find("T_k f'")->measured - 3.0);
            res.add(rep.find("residual")->measured);
            if (x == 0.5) {
                disc = rep.find("discrepancy")->measured;
                boundary = rep.find("boundary term")->measured;
            }
        }
        out.at_most("identities.recursion.y3.T2f_minus_2", t2.value, 1e-8);
        out.at_most("identities.recursion.y3.T1df_minus_3", t1.value, 1e-8);
        out.expect("identities.recursion.y3.uncorrected_discrepancy", disc, -1.0, 1e-8);
        out.expect("identities.recursion.y3.boundary_term", boundary, -1.0, 1e-12);
        out.at_most("identities.recursion.y3.corrected_residual", res.value, 1e-7);
    }
    {
        detail::Worst w;
        const std::vector<std::pair<FuncSpec, Interval>> fs = {
            {corpus::monomial(2), U},
            {corpus::monomial(3), U},
            {corpus::monomial(4), U},
            {corpus::rational(), Interval(-1.0, 1.0)},
            {corpus::lorentzian(), Interval(-1.0, 1.0)},
        };
        for (const auto& [f, I] : fs)
            for (int k = 0; k <= 3; ++k)
                for (double t : {0.3, 0.5, 0.8}) w.add(recursion_discrepancy(f, I, I.a + t * I.length(), k, cfg).find("residual")->measured);
        out.at_most("identities.recursion.corrected_residual_corpus", w.value, 1e-7);
        const ProbeReport r = recursion_discrepancy(corpus::rational(), Interval(-1.0, 1.0), 0.0, 1, cfg);
        out.at_most("identities.recursion.rational_k1_at_0", r.find("residual")->measured, 1e-8);
    }

    // (Hf)' against H(f').
    {
        const auto grid = detail::linspace(-0.4, 0.4, 9);
        const Interval core(-1.0, 1.0);
        out.at_most("identities.commute.lorentzian", commute_check(corpus::lorentzian(), core, grid, cfg).max_measured(),
                    1e-4);
        out.at_most("identities.commute.bump", commute_check(corpus::bump(), core, grid, cfg).max_measured(), 1e-4);
        out.at_most("identities.commute.zero", commute_check(corpus::constant(0.0), core, grid, cfg).max_measured(), 0.0);
    }
    return out.take();
}

inline std::vector<CheckResult> verify_regularity(const OpConfig& cfg = {}) {
    CheckList out;
    const Interval U(0.0, 1.0);

    {
        AnalyticityProbeConfig ac;
        ac.x0 = 0.0;
        ac.delta = 1.0;
        ac.c = 0.5;
        ac.delta1 = 1.0;
        ac.k_max = 6;
        const ProbeReport rep = analyticity_probe(corpus::rational(), ac, cfg);
        out.at_most("regularity.analyticity.rational_worst_ratio", rep.worst_ratio, 1.0, 1e-6);
        const ProbeReport cubic = analyticity_probe(parse_function("0.01*x^3"), ac, cfg);
        out.at_most("regularity.analyticity.small_cubic_worst_ratio", cubic.worst_ratio, 1.0, 1e-6);
    }

    {
        const auto scales = dyadic_scales(1.0, 4, 20);
        for (double beta : {0.3, 0.5, 0.7}) {
            const HolderFit fit = modulus_and_fit([beta](double x) { return std::pow(std::fabs(x), beta); }, 0.0, scales);
            char id[64];
            std::snprintf(id, sizeof id, "regularity.fit.abs_power_%.1f", beta);
            out.expect(id, fit.alpha_hat, beta, 0.05);
        }
        out.at_least("regularity.fit.sine", modulus_and_fit([](double x) { return std::sin(x); }, 0.0, scales).alpha_hat,
                     0.95);
        const FuncSpec st = corpus::step();
        out.at_most("regularity.fit.step", modulus_and_fit([&](double x) { return st(x); }, 0.0, scales).alpha_hat, 0.05);
    }

    // Exponent of the computed transform of the shifted power at its onset.
    {
        const FuncSpec sp = corpus::shifted_power(0.5, 0.5);
        const auto scales = dyadic_scales(1.0, 6, 16);
        bool conv = true;
        const HolderFit fit = modulus_and_fit(
            [&](double x) {
                const QuadResult r = finite_hilbert(sp, U, x, cfg);
                conv = conv && r.converged;
                return r.value;
            },
            0.5, scales, 1e-10);
        out.at_least("regularity.fit.transform_shifted_power", fit.alpha_hat, 0.45, 0.0, conv);
    }

    {
        const ProbeReport sp = t_bound_ratio(corpus::shifted_power(0.5, 0.5), U, 0.5, 0, PairFamily::standard(U), cfg);
        const ProbeRecord* r = sp.find("scale stability");
        out.at_most("regularity.t_bound.shifted_power", r->measured, r->bound);
        const ProbeReport y2 = t_bound_ratio(corpus::monomial(2), U, 0.5, 0, PairFamily::standard(U), cfg);
        out.at_most("regularity.t_bound.y2", y2.find("scale stability")->measured, y2.find("scale stability")->bound);
        const ProbeReport y3 = t_bound_ratio(corpus::monomial(3), U, 0.5, 1, PairFamily::standard(U), cfg);
        out.at_most("regularity.t_bound.y3_T1", y3.find("scale stability")->measured, y3.find("scale stability")->bound);
    }

    {
        out.expect("regularity.seminorm.sqrt", holder_seminorm(corpus::xalpha(0.5), U, 0.5, 1000).seminorm, 1.0, 0.02);
        out.expect("regularity.seminorm.identity", holder_seminorm(parse_function("x"), U, 0.5, 1000).seminorm, 1.0,
                   0.02);
        const FuncSpec f = corpus::shifted_power(0.3, 0.5);
        const double s25 = holder_seminorm(f, U, 0.25).seminorm;
        const double s50 = holder_seminorm(f, U, 0.5).seminorm;
        const double s75 = holder_seminorm(f, U, 0.75).seminorm;
        out.at_least("regularity.seminorm.monotone_in_alpha", std::min(s50 - s25, s75 - s50), 0.0);
    }
    return out.take();
}

inline std::vector<CheckResult> verify_algebra(const OpConfig& cfg = {}) {
    CheckList out;
    const Interval U(0.0, 1.0), S(-1.0, 1.0);
    const auto points = detail::linspace(0.05, 0.95, 10);

    {
        detail::Worst w;
        for (double c : {-3.0, -1.0, -0.5, 0.0, 0.1, 0.5, 1.0, 2.0, 7.5, 100.0})
            for (double x : points) {
                const QuadResult r = apply_T(corpus::constant(c), U, x, cfg);
                w.add(r.value, r.converged);
            }
        out.at_most("algebra.T_kills_constants", w.value, 1e-12, 0.0, w.converged);
    }
    {
        detail::Worst w;
        const std::vector<std::pair<int, std::string>> polys = {
            {1, "2*x - 1"},         {1, "3 - 0.5*x"},           {2, "x^2 - x + 0.25"},
            {2, "4*x^2 + 3"},       {3, "x^3 - 2*x^2 + x - 7"}, {3, "0.5*x^3 + x"},
        };
        for (const auto& [deg, src] : polys) {
            const FuncSpec p = parse_function(src).with_smoothness(corpus::kSmooth);
            for (int k = deg; k <= 3; ++k)
                for (double x : points) {
                    const QuadResult r = apply_Tk(p, U, x, k, cfg);
                    w.add(r.value, r.converged);
                }
        }
        out.at_most("algebra.Tk_kills_polynomials", w.value, 1e-10, 0.0, w.converged);
    }

    // Err-relative properties report the worst |difference| / (2 x summed err_est).
    auto ratio = [](double diff, double err) { return err > 0.0 ? std::fabs(diff) / (2.0 * err) : (diff == 0.0 ? 0.0 : INFINITY); };
    {
        detail::Worst w;
        const std::vector<std::pair<std::string, std::string>> pairs = {
            {"sin(3*x)", "x^2"},
            {"abs(x)^0.5", "exp(x)"},
            {"1/(1 + x^2)", "cos(x) + abs(x - 0.3)^0.7"},
        };
        const std::vector<std::pair<double, double>> coeffs = {{1.0, 1.0}, {2.0, -0.5}, {-1.5, 3.0}};
        for (const auto& [fs, gs] : pairs) {
            const FuncSpec f = parse_function(fs), g = parse_function(gs);
            for (const auto& [al, be] : coeffs) {
                const FuncSpec h = parse_function(expr::detail::fmt17(al) + "*(" + fs + ") + " +
                                                  expr::detail::fmt17(be) + "*(" + gs + ")");
                for (double t : {0.2, 0.55, 0.85}) {
                    const double x = S.a + t * S.length();
                    const QuadResult rf = apply_T(f, S, x, cfg), rg = apply_T(g, S, x, cfg), rh = apply_T(h, S, x, cfg);
                    const double err = std::fabs(al) * rf.err_est + std::fabs(be) * rg.err_est + rh.err_est;
                    w.add(ratio(rh.value - al * rf.value - be * rg.value, err), rf.converged && rg.converged && rh.converged);
                }
            }
        }
        out.at_most("algebra.T_linearity", w.value, 1.0, 0.0, w.converged);
    }
    {
        detail::Worst w;
        const FuncSpec f = parse_function("sin(2*x) + x^3").with_smoothness(corpus::kSmooth);
        const FuncSpec g = parse_function("exp(x) - x").with_smoothness(corpus::kSmooth);
        const FuncSpec h = parse_function("2*(sin(2*x) + x^3) - 3*(exp(x) - x)").with_smoothness(corpus::kSmooth);
        for (int k = 1; k <= 2; ++k)
            for (double t : {0.3, 0.6}) {
                const double x = S.a + t * S.length();
                const QuadResult rf = apply_Tk(f, S, x, k, cfg), rg = apply_Tk(g, S, x, k, cfg),
                                 rh = apply_Tk(h, S, x, k, cfg);
                const double err = 2.0 * rf.err_est + 3.0 * rg.err_est + rh.err_est;
                w.add(ratio(rh.value - 2.0 * rf.value + 3.0 * rg.value, err), rf.converged && rg.converged && rh.converged);
            }
        out.at_most("algebra.Tk_linearity", w.value, 1.0, 0.0, w.converged);
    }
    {
        detail::Worst tr, sc;
        const std::vector<FuncSpec> fs = {parse_function("abs(x - 0.1)^0.5 + sin(x)"), parse_function("1/(2 + x^2)"),
                                          corpus::semicircle()};
        for (const FuncSpec& f : fs) {
            for (double s : {0.25, -0.5, 1.0, 2.0, -3.0}) {
                const FuncSpec g = compose_affine(f, 1.0, -s);
                for (double t : {0.3, 0.6}) {
                    const double x = S.a + t * S.length();
                    const QuadResult a = apply_T(f, S, x, cfg);
                    const QuadResult b = apply_T(g, Interval(S.a + s, S.b + s), x + s, cfg);
                    tr.add(ratio(a.value - b.value, a.err_est + b.err_est), a.converged && b.converged);
                }
            }
            for (double lam : {0.5, 2.0, 3.0}) {
                const FuncSpec g = compose_affine(f, lam, 0.0);
                for (double t : {0.3, 0.6}) {
                    const double x = S.a + t * S.length();
                    const QuadResult a = apply_T(g, Interval(S.a / lam, S.b / lam), x / lam, cfg);
                    const QuadResult b = apply_T(f, S, x, cfg);
                    sc.add(ratio(a.value - b.value, a.err_est + b.err_est), a.converged && b.converged);
                }
            }
        }
        out.at_most("algebra.translation_covariance", tr.value, 1.0, 0.0, tr.converged);
        out.at_most("algebra.scaling_covariance", sc.value, 1.0, 0.0, sc.converged);
    }
    {
        detail::Worst w;
        for (const corpus::Entry& e : corpus::holder_corpus())
            for (double t : {0.23, 0.5, 0.77}) {
                const double x = e.I.a + t * e.I.length();
                const QuadResult fh = finite_hilbert(e.f, e.I, x, cfg);
                const QuadResult ex = pv_cauchy_excision([&](double y) { return e.f(y); }, e.I, x, cfg.quad,
                                                         PvHints{e.left_exp, e.right_exp, 0.0})
                                          .scaled(1.0 / std::numbers::pi);
                w.add(ratio(fh.value - ex.value, fh.err_est + ex.err_est));
            }
        out.at_most("algebra.decomposition_consistency", w.value, 1.0);
    }
    return out.take();
}

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {"oracles", "identities", "regularity", "algebra"};
    return names;
}

inline std::vector<CheckResult> run_suite(const std::string& name, const OpConfig& cfg = {}) {
    if (name == "oracles") return verify_oracles(cfg);
    if (name == "identities") return verify_identities(cfg);
    if (name == "regularity") return verify_regularity(cfg);
    if (name == "algebra") return verify_algebra(cfg);
    if (name == "all") {
        std::vector<CheckResult> all;
        for (const auto& n : suite_names()) {
            auto part = run_suite(n, cfg);
            all.insert(all.end(), part.begin(), part.end());
        }
        return all;
    }
    throw std::invalid_argument("unknown suite '" + name + "'");
}

}  // namespace sivt
