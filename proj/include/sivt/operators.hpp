#pragma once

// Taylor polynomials, the singularity-subtracted operators T and T_k, the
// finite and global Hilbert transforms, and the derivative identity checks.

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sivt/expr.hpp"
#include "sivt/probe.hpp"
#include "sivt/quad.hpp"

namespace sivt {

struct OpConfig {
    QuadConfig quad;
    /// Distance finite_hilbert keeps from the endpoints; <= 0 means 1e-3 (b - a).
    double margin = 0.0;
    /// Below this distance from the pole the T integrand is replaced by its Taylor limit.
    double h0 = 1e-6;

    double margin_for(const Interval& I) const { return margin > 0.0 ? margin : 1e-3 * I.length(); }
};

/// c[0] + c[1] (y - x) + ... + c[k] (y - x)^k.
struct Polynomial {
    double x = 0.0;
    std::vector<double> c;

    int degree() const noexcept { return static_cast<int>(c.size()) - 1; }

    double operator()(double y) const {
        const double t = y - x;
        double v = 0.0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * t + *it;
        return v;
    }
};

namespace detail {

/// Value of the expression governing one side of x, or NaN if it is not finite there.
inline double side_value(const FuncSpec& f, double x, Side side) {
    try {
        const double v = f.eval_side(x, side);
        return std::isfinite(v) ? v : std::numeric_limits<double>::quiet_NaN();
    } catch (const DomainError&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

inline double factorial(int k) {
    double r = 1.0;
    for (int i = 2; i <= k; ++i) r *= i;
    return r;
}

inline Polynomial taylor_from_tower(std::span<const FuncSpec> tower, double x, int k) {
    Polynomial p{x, {}};
    double fact = 1.0;
    for (int i = 0; i <= k; ++i) {
        if (i > 0) fact *= i;
        const double d = tower[i](x);
        if (!std::isfinite(d)) throw DomainError("derivative of order " + std::to_string(i) + " is not finite");
        p.c.push_back(d / fact);
    }
    return p;
}

/// Cut points of [a, b]: a, the breakpoints of f strictly inside, extra points, b.
inline std::vector<double> cut_points(const FuncSpec& f, double a, double b, std::initializer_list<double> extra = {}) {
    std::vector<double> cuts{a, b};
    for (double bp : f.breakpoints())
        if (a < bp && bp < b) cuts.push_back(bp);
    for (double e : extra)
        if (a < e && e < b) cuts.push_back(e);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    return cuts;
}

/// Power-law exponent to hand the endpoint substitution at c, seen from one
/// side. Zero where f is smooth; a negative estimate where f blows up; the
/// annotated Hoelder exponent where only the derivative blows up.
inline double endpoint_exponent(const FuncSpec& f, const FuncSpec& df, double c, Side side, double scale) {
    const double sign = side == Side::Right ? 1.0 : -1.0;
    if (std::isnan(side_value(f, c, side))) {
        const double d = 1e-6 * scale;
        const double f1 = std::fabs(side_value(f, c + sign * d, side));
        const double f2 = std::fabs(side_value(f, c + sign * 2.0 * d, side));
        if (!(f1 > 0.0 && f2 > 0.0)) return 0.0;
        return std::clamp(std::log(f2 / f1) / std::numbers::ln2, -0.95, 0.0);
    }
    if (std::isnan(side_value(df, c, side))) {
        const double a = f.smoothness().alpha;
        return a > 0.0 && a < 1.0 ? a : 0.5;
    }
    return 0.0;
}

inline double annotated_pole_exponent(const FuncSpec& f) {
    const double a = f.smoothness().alpha;
    return (a > 0.0 && a < 1.0 ? a : 0.5) - 1.0;
}

inline QuadConfig split_tolerance(const QuadConfig& cfg, std::size_t parts) {
    QuadConfig c = cfg;
    c.abs_tol = cfg.abs_tol / static_cast<double>(std::max<std::size_t>(parts, 1));
    return c;
}

/// Integral of kernel over [lo, hi], split at f's breakpoints, with
/// substitution hints wherever f or f' is singular.
template <class K>
QuadResult integrate_split(const K& kernel, const FuncSpec& f, const FuncSpec& df, double lo, double hi,
                           const QuadConfig& cfg) {
    QuadResult out;
    const auto cuts = cut_points(f, lo, hi);
    const QuadConfig seg = split_tolerance(cfg, cuts.size() - 1);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double s0 = cuts[i], s1 = cuts[i + 1];
        const double scale = s1 - s0;
        const double el = endpoint_exponent(f, df, s0, Side::Right, scale);
        const double er = endpoint_exponent(f, df, s1, Side::Left, scale);
        out += integrate_endpoint_singular(kernel, s0, s1, el, er, seg);
    }
    return out;
}

}  // namespace detail

/// P_k(x, y) = sum_{i<=k} f^(i)(x)/i! (y - x)^i.
inline Polynomial taylor_poly(const FuncSpec& f, double x, int k) {
    if (k < 0) throw std::invalid_argument("taylor_poly: order must be non-negative");
    if (f.is_breakpoint(x)) throw std::invalid_argument("taylor_poly: expansion point lies on a piece breakpoint");
    const auto tower = derivative_tower(f, k);
    return detail::taylor_from_tower(tower, x, k);
}

namespace detail {

/// int_a^b tau(y) (D(y) - D(x))/(y - x) dy with the taper
/// tau(y) = (1 - (y - x)/(b - x))^k right of x and (1 - (x - y)/(x - a))^k left of it.
/// dD and d2D (either may be empty) feed the linear model next to the pole.
inline QuadResult tapered_difference_integral(const FuncSpec& D, const FuncSpec& dD, const FuncSpec& d2D, bool has_d1,
                                              bool has_d2, const Interval& I, double x, int k, const OpConfig& cfg) {
    const auto cuts = cut_points(D, I.a, I.b, {x});
    const QuadConfig seg = split_tolerance(cfg.quad, cuts.size() - 1);
    double reach = I.length();
    for (double c : cuts)
        if (c != x) reach = std::min(reach, std::fabs(c - x));
    const double left_len = x - I.a, right_len = I.b - x;
    QuadResult out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double s0 = cuts[i], s1 = cuts[i + 1];
        const double scale = s1 - s0;
        // Which side of the pole this segment sits on, if it touches it.
        const bool pole_left = s0 == x, pole_right = s1 == x;
        const bool right_of_x = s0 >= x;
        double fx = D(x);
        double d1 = std::numeric_limits<double>::quiet_NaN(), d2 = 0.0;
        double el = 0.0, er = 0.0;
        if (pole_left || pole_right) {
            const Side side = pole_left ? Side::Right : Side::Left;
            fx = side_value(D, x, side);
            if (has_d1) d1 = side_value(dD, x, side);
            if (std::isfinite(d1) && has_d2) {
                d2 = side_value(d2D, x, side);
                if (!std::isfinite(d2)) d2 = 0.0;
            }
            const double pole_exp = std::isfinite(d1) ? 0.0 : annotated_pole_exponent(D);
            (pole_left ? el : er) = pole_exp;
        }
        if (!pole_left) el = has_d1 ? endpoint_exponent(D, dD, s0, Side::Right, scale) : 0.0;
        if (!pole_right) er = has_d1 ? endpoint_exponent(D, dD, s1, Side::Left, scale) : 0.0;
        const bool clamp = std::isfinite(d1);
        // The linear model must stay well inside the smooth stretch next to the pole.
        const double h0 = std::min(cfg.h0, 1e-3 * reach);
        const double len = right_of_x ? right_len : left_len;
        auto q = [&](double y) {
            const double t = y - x;
            const double taper = k == 0 ? 1.0 : std::pow(std::max(0.0, 1.0 - std::fabs(t) / len), k);
            if (clamp && std::fabs(t) < h0) return taper * (d1 + 0.5 * d2 * t);
            return taper * (D(y) - fx) / t;
        };
        out += integrate_endpoint_singular(q, s0, s1, el, er, seg);
    }
    return out;
}

}  // namespace detail

/// T f(x) = int_a^b (f(y) - f(x))/(y - x) dy.
inline QuadResult apply_T(const FuncSpec& f, const Interval& I, double x, const OpConfig& cfg = {}) {
    if (!I.interior(x)) throw std::invalid_argument("apply_T: x must lie strictly inside the interval");
    const FuncSpec df = differentiate(f, 1);
    return detail::tapered_difference_integral(f, df, differentiate(df, 1), true, true, I, x, 0, cfg);
}

/// T_k f(x) = k! int_a^b (f(y) - P_k(x,y))/(y - x)^{k+1} dy.
///
/// Writing the remainder in integral form and swapping the order of
/// integration turns this into
///   int_a^b tau(y) (f^(k)(y) - f^(k)(x))/(y - x) dy,
/// with tau(y) = (1 - (y - x)/(b - x))^k for y > x and (1 - (x - y)/(x - a))^k
/// for y < x. Only first differences of f^(k) appear, so no order-k
/// cancellation of f - P_k is ever formed.
inline QuadResult apply_Tk(const FuncSpec& f, const Interval& I, double x, int k, const OpConfig& cfg = {}) {
    if (k < 0) throw std::invalid_argument("apply_Tk: order must be non-negative");
    if (k == 0) return apply_T(f, I, x, cfg);
    if (!I.interior(x)) throw std::invalid_argument("apply_Tk: x must lie strictly inside the interval");
    const Smoothness s = f.smoothness();
    if (s.k >= 0 && s.k < k)
        throw std::invalid_argument("apply_Tk: f is annotated C^" + std::to_string(s.k) + " but T_" +
                                    std::to_string(k) + " needs C^" + std::to_string(k));
    if (f.is_breakpoint(x)) throw std::invalid_argument("apply_Tk: x lies on a piece breakpoint");

    const FuncSpec Dk = differentiate(f, k);
    // Past the derivative cap the pole falls back to the power-law hint.
    const bool has_d1 = k < kMaxDerivativeOrder, has_d2 = k + 1 < kMaxDerivativeOrder;
    const FuncSpec Dk1 = has_d1 ? differentiate(Dk, 1) : FuncSpec{};
    const FuncSpec Dk2 = has_d2 ? differentiate(Dk1, 1) : FuncSpec{};
    return detail::tapered_difference_integral(Dk, Dk1, Dk2, has_d1, has_d2, I, x, k, cfg);
}

/// p.v. (1/pi) int_a^b f(y)/(x - y) dy = -(1/pi) T f(x) + (f(x)/pi) ln|(x - a)/(x - b)|.
inline QuadResult finite_hilbert(const FuncSpec& f, const Interval& I, double x, const OpConfig& cfg = {}) {
    const double m = cfg.margin_for(I);
    if (!(x >= I.a + m && x <= I.b - m))
        throw std::invalid_argument("finite_hilbert: x = " + expr::detail::fmt17(x) + " is within " +
                                    expr::detail::fmt17(m) + " of an endpoint");
    QuadResult t = apply_T(f, I, x, cfg);
    QuadResult out = t.scaled(-1.0 / std::numbers::pi);
    out.value += f(x) / std::numbers::pi * std::log(std::fabs((x - I.a) / (x - I.b)));
    return out;
}

/// Hilbert transform on the real line: the finite transform on the core plus
/// the two tails. When f has bounded support and x lies outside it, the kernel
/// is regular on the support and the integral is taken directly.
inline QuadResult global_hilbert(const FuncSpec& f, const Interval& core, double x, const OpConfig& cfg = {}) {
    constexpr double inv_pi = 1.0 / std::numbers::pi;
    const Support s = f.support();
    if (s.empty()) return {};
    const FuncSpec df = differentiate(f, 1);
    auto kernel = [&](double y) { return f(y) / (x - y); };

    if (s.bounded() && !(s.lo < x && x < s.hi)) {
        if (x == s.lo || x == s.hi)
            throw std::invalid_argument("global_hilbert: x on the boundary of the support");
        return detail::integrate_split(kernel, f, df, s.lo, s.hi, cfg.quad).scaled(inv_pi);
    }
    if (!core.interior(x)) throw std::invalid_argument("global_hilbert: x must lie strictly inside the core");

    OpConfig inner = cfg;
    inner.quad.abs_tol /= 3.0;
    QuadResult out = finite_hilbert(f, core, x, inner);

    // Left of the core: finite pieces directly, the unbounded remainder through u = 1/(x - y).
    if (s.lo < core.a) {
        double start = s.lo;
        if (!std::isfinite(s.lo)) {
            start = core.a;
            for (double bp : f.breakpoints()) start = std::min(start, bp);
            out += tail_integral(f, Tail::left(start), x, inner.quad).scaled(inv_pi);
        }
        if (start < core.a) out += detail::integrate_split(kernel, f, df, start, core.a, inner.quad).scaled(inv_pi);
    }
    if (s.hi > core.b) {
        double stop = s.hi;
        if (!std::isfinite(s.hi)) {
            stop = core.b;
            for (double bp : f.breakpoints()) stop = std::max(stop, bp);
            out += tail_integral(f, Tail::right(stop), x, inner.quad).scaled(inv_pi);
        }
        if (core.b < stop) out += detail::integrate_split(kernel, f, df, core.b, stop, inner.quad).scaled(inv_pi);
    }
    return out;
}

struct TransformGrid {
    std::string op;
    int k = 0;
    double a = 0.0;
    double b = 0.0;
    std::vector<double> x;
    std::vector<double> value;
    std::vector<double> err_est;
    std::vector<bool> converged;

    bool all_converged() const { return std::all_of(converged.begin(), converged.end(), [](bool c) { return c; }); }
};

/// n equally spaced points on [a + margin, b - margin].
inline std::vector<double> interior_grid(const Interval& I, int n, double margin) {
    if (n < 2) throw std::invalid_argument("grid needs at least 2 points");
    if (!(margin > 0.0) || !(2.0 * margin < I.length())) throw std::invalid_argument("margin must lie in (0, (b-a)/2)");
    std::vector<double> xs(n);
    const double lo = I.a + margin, hi = I.b - margin;
    for (int i = 0; i < n; ++i) xs[i] = i == n - 1 ? hi : lo + (hi - lo) * i / (n - 1);
    return xs;
}

/// Evaluate one operator (T, Tk, finite-hilbert, hilbert) over a grid of I.
inline TransformGrid transform_grid(const FuncSpec& f, const Interval& I, const std::string& op, int n, int k,
                                    const OpConfig& cfg = {}) {
    TransformGrid g{op, k, I.a, I.b, {}, {}, {}, {}};
    g.x = interior_grid(I, n, cfg.margin_for(I));
    for (double x : g.x) {
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
            throw std::invalid_argument("unknown operator '" + op + "'");
        if (!std::isfinite(r.value)) throw DomainError("non-finite transform value at x = " + expr::detail::fmt17(x));
        g.value.push_back(r.value);
        g.err_est.push_back(r.err_est);
        g.converged.push_back(r.converged);
    }
    return g;
}

namespace detail {

/// k-th derivative of g at x by Richardson extrapolation of second-order
/// central differences at steps h0, h0/2, ... Returns (estimate, error).
template <class G>
std::pair<double, double> richardson_derivative(const G& g, double x, int k, double h0, int levels = 5) {
    static const std::vector<std::vector<std::pair<int, double>>> stencils = {
        {{0, 1.0}},
        {{-1, -0.5}, {1, 0.5}},
        {{-1, 1.0}, {0, -2.0}, {1, 1.0}},
        {{-2, -0.5}, {-1, 1.0}, {1, -1.0}, {2, 0.5}},
        {{-2, 1.0}, {-1, -4.0}, {0, 6.0}, {1, -4.0}, {2, 1.0}},
    };
    if (k < 0 || k >= static_cast<int>(stencils.size()))
        throw std::invalid_argument("finite differences support orders 0..4");
    std::map<double, double> memo;
    auto at = [&](double y) {
        auto it = memo.find(y);
        if (it != memo.end()) return it->second;
        const double v = g(y);
        memo.emplace(y, v);
        return v;
    };
    std::vector<std::vector<double>> A(levels);
    double best = 0.0, best_err = std::numeric_limits<double>::infinity();
    double h = h0;
    for (int i = 0; i < levels; ++i, h *= 0.5) {
        double d = 0.0;
        for (const auto& [m, c] : stencils[k]) d += c * at(x + m * h);
        A[i].push_back(d / std::pow(h, k));
        double four = 1.0;
        for (int j = 1; j <= i; ++j) {
            four *= 4.0;
            A[i].push_back(A[i][j - 1] + (A[i][j - 1] - A[i - 1][j - 1]) / (four - 1.0));
            const double err = std::max(std::fabs(A[i][j] - A[i][j - 1]), std::fabs(A[i][j] - A[i - 1][j - 1]));
            if (err < best_err) {
                best_err = err;
                best = A[i][j];
            }
        }
        if (i == 0) best = A[0][0];
    }
    return {best, best_err};
}

/// Largest step whose stencil stays inside [a, b] and clear of f's breakpoints.
inline double fd_step(const FuncSpec& f, double a, double b, double x, int k) {
    double dist = std::min(x - a, b - x);
    for (double bp : f.breakpoints())
        if (a < bp && bp < b) dist = std::min(dist, std::fabs(bp - x));
    const double reach = k <= 2 ? 1.0 : 2.0;
    return std::min(0.05 * (b - a), 0.9 * dist / reach);
}

inline OpConfig tight(const OpConfig& cfg) {
    OpConfig c = cfg;
    c.quad.abs_tol = std::min(cfg.quad.abs_tol, 1e-13);
    c.quad.rel_tol = std::min(cfg.quad.rel_tol, 1e-13);
    return c;
}

}  // namespace detail

/// Compares the k-th derivative of Tf (finite differences) against T_k f on a grid.
inline ProbeReport dk_Tf_check(const FuncSpec& f, const Interval& I, std::span<const double> grid, int k,
                               const OpConfig& cfg = {}, double bound = 1e-4) {
    ProbeReport rep("dk_Tf_check k=" + std::to_string(k));
    const OpConfig fine = detail::tight(cfg);
    for (double x : grid) {
        auto Tf = [&](double y) { return apply_T(f, I, y, fine).value; };
        const auto [fd, fd_err] = detail::richardson_derivative(Tf, x, k, detail::fd_step(f, I.a, I.b, x, k));
        const double tk = apply_Tk(f, I, x, k, fine).value;
        rep.note("fd x=" + expr::detail::fmt17(x), fd, fd_err);
        rep.note("Tk x=" + expr::detail::fmt17(x), tk);
        rep.check("deviation x=" + expr::detail::fmt17(x), std::fabs(fd - tk), bound);
    }
    return rep;
}

/// Measures T_{k+1} f(x), T_k f'(x), their difference, and the boundary term
///   -k! [ R(b)/(b - x)^{k+1} - R(a)/(a - x)^{k+1} ],  R = f - P_k(x, .),
/// that differentiation under the integral with fixed limits leaves behind:
///   T_{k+1} f - T_k f' = boundary term.
/// The gating record is the residual of that corrected identity.
inline ProbeReport recursion_discrepancy(const FuncSpec& f, const Interval& I, double x, int k,
                                         const OpConfig& cfg = {}, double bound = 1e-7) {
    ProbeReport rep("recursion_discrepancy k=" + std::to_string(k));
    const OpConfig fine = detail::tight(cfg);
    const FuncSpec df = differentiate(f, 1);
    const double lhs = apply_Tk(f, I, x, k + 1, fine).value;
    const double rhs = apply_Tk(df, I, x, k, fine).value;
    const Polynomial P = taylor_poly(f, x, k);
    auto R = [&](double y) { return f(y) - P(y); };
    const double fact = detail::factorial(k);
    const double boundary = -fact * (R(I.b) / std::pow(I.b - x, k + 1) - R(I.a) / std::pow(I.a - x, k + 1));
    const double discrepancy = lhs - rhs;
    rep.note("T_{k+1} f", lhs);
    rep.note("T_k f'", rhs);
    rep.note("discrepancy", discrepancy);
    rep.note("boundary term", boundary);
    rep.check("residual", std::fabs(discrepancy - boundary), bound);
    return rep;
}

/// Compares the derivative of Hf (finite differences) with H(f') on a grid.
inline ProbeReport commute_check(const FuncSpec& f, const Interval& core, std::span<const double> grid,
                                 const OpConfig& cfg = {}, double bound = 1e-4) {
    ProbeReport rep("commute_check");
    const OpConfig fine = detail::tight(cfg);
    const FuncSpec df = differentiate(f, 1);
    for (double x : grid) {
        auto Hf = [&](double y) { return global_hilbert(f, core, y, fine).value; };
        const auto [fd, fd_err] = detail::richardson_derivative(Hf, x, 1, detail::fd_step(f, core.a, core.b, x, 1));
        const double hdf = global_hilbert(df, core, x, fine).value;
        rep.note("fd x=" + expr::detail::fmt17(x), fd, fd_err);
        rep.note("H(f') x=" + expr::detail::fmt17(x), hdf);
        rep.check("deviation x=" + expr::detail::fmt17(x), std::fabs(fd - hdf), bound);
    }
    return rep;
}

}  // namespace sivt
