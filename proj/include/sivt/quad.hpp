#pragma once

// Adaptive Gauss-Kronrod quadrature plus the singular variants the
// operators need: power-law endpoint singularities, Cauchy principal values
// (subtraction and excision backends) and semi-infinite tails.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "sivt/expr.hpp"

namespace sivt {

/// Closed finite interval [a, b] with a < b.
struct Interval {
    double a;
    double b;

    Interval(double lo, double hi) : a(lo), b(hi) {
        if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
            throw std::invalid_argument("interval requires finite a < b");
    }

    double length() const noexcept { return b - a; }
    bool contains(double x) const noexcept { return a <= x && x <= b; }
    bool interior(double x) const noexcept { return a < x && x < b; }
};

struct QuadConfig {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_depth = 60;
    // Excision radii eps_j = eps0 * ratio^j, j = 0..j_max.
    double eps0 = 1e-2;
    double ratio = 0.5;
    int j_max = 40;
    // Hard cap on panels per adaptive call.
    int max_panels = 20000;

    double tolerance(double value) const noexcept { return std::max(abs_tol, rel_tol * std::fabs(value)); }
};

struct QuadResult {
    double value = 0.0;
    double err_est = 0.0;
    long n_eval = 0;
    bool converged = true;
    // Set only by the excision backend when the excised partial integrals
    // fail the geometric Cauchy test.
    bool diverged = false;

    QuadResult& operator+=(const QuadResult& o) {
        value += o.value;
        err_est += o.err_est;
        n_eval += o.n_eval;
        converged = converged && o.converged;
        diverged = diverged || o.diverged;
        return *this;
    }

    friend QuadResult operator+(QuadResult a, const QuadResult& b) { return a += b; }

    /// Multiply value and error by s.
    QuadResult scaled(double s) const {
        QuadResult r = *this;
        r.value *= s;
        r.err_est *= std::fabs(s);
        return r;
    }
};

namespace detail {

// Gauss-Kronrod 7/15 abscissae and weights.
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a;
    double b;
    double value;
    double err;
    double abs_value;
    int depth;
};

template <class F>
Panel gk15(const F& f, double a, double b, int depth) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double resk = fc * kWgk[7];
    double resg = fc * kWg[3];
    double resabs = std::fabs(resk);
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const double f1 = f(c - dx);
        const double f2 = f(c + dx);
        resk += kWgk[j] * (f1 + f2);
        resabs += kWgk[j] * (std::fabs(f1) + std::fabs(f2));
        if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
    }
    const double value = resk * h;
    if (!std::isfinite(value))
        throw DomainError("non-finite integrand on [" + std::to_string(a) + ", " + std::to_string(b) + "]");
    return Panel{a, b, value, std::fabs((resk - resg) * h), resabs * std::fabs(h), depth};
}

/// Neumaier-compensated sum of panel values in left-to-right order.
inline double ordered_sum(std::vector<Panel>& panels) {
    std::sort(panels.begin(), panels.end(), [](const Panel& p, const Panel& q) { return p.a < q.a; });
    double sum = 0.0, comp = 0.0;
    for (const Panel& p : panels) {
        const double t = sum + p.value;
        comp += std::fabs(sum) >= std::fabs(p.value) ? (sum - t) + p.value : (p.value - t) + sum;
        sum = t;
    }
    return sum + comp;
}

}  // namespace detail

/// Globally adaptive bisection; err_est is the summed |K15 - G7| discrepancy.
template <class F>
QuadResult integrate(const F& f, double a, double b, const QuadConfig& cfg = {}) {
    if (a == b) return {};
    if (b < a) return integrate(f, b, a, cfg).scaled(-1.0);
    constexpr double eps = std::numeric_limits<double>::epsilon();
    auto by_err = [](const detail::Panel& p, const detail::Panel& q) { return p.err < q.err; };
    std::priority_queue<detail::Panel, std::vector<detail::Panel>, decltype(by_err)> open(by_err);
    std::vector<detail::Panel> done;
    QuadResult out;

    detail::Panel first = detail::gk15(f, a, b, 0);
    out.n_eval = 15;
    double total = first.value, total_err = first.err, total_abs = first.abs_value;
    open.push(first);

    while (!open.empty()) {
        const double floor = 50.0 * eps * total_abs;
        if (total_err <= std::max(cfg.tolerance(total), floor)) break;
        if (static_cast<int>(open.size() + done.size()) >= cfg.max_panels) break;
        detail::Panel p = open.top();
        open.pop();
        const double mid = 0.5 * (p.a + p.b);
        // Panels that can no longer be split, or whose error is pure rounding, are final.
        if (p.depth >= cfg.max_depth || !(p.a < mid && mid < p.b) || p.err <= 50.0 * eps * p.abs_value) {
            done.push_back(p);
            continue;
        }
        detail::Panel l = detail::gk15(f, p.a, mid, p.depth + 1);
        detail::Panel r = detail::gk15(f, mid, p.b, p.depth + 1);
        out.n_eval += 30;
        total += l.value + r.value - p.value;
        total_err += l.err + r.err - p.err;
        total_abs += l.abs_value + r.abs_value - p.abs_value;
        // Deep bisections that fail to shrink the error are sampling rounding noise.
        if (p.depth >= 12 && l.err + r.err >= p.err) {
            done.push_back(l);
            done.push_back(r);
            continue;
        }
        open.push(l);
        open.push(r);
    }
    while (!open.empty()) {
        done.push_back(open.top());
        open.pop();
    }
    out.value = detail::ordered_sum(done);
    out.err_est = 0.0;
    double abs_sum = 0.0;
    for (const auto& p : done) {
        out.err_est += p.err;
        abs_sum += p.abs_value;
    }
    out.converged = out.err_est <= std::max(cfg.tolerance(out.value), 50.0 * eps * abs_sum);
    return out;
}

template <class F>
QuadResult integrate(const F& f, const Interval& I, const QuadConfig& cfg = {}) {
    return integrate(f, I.a, I.b, cfg);
}

namespace detail {

/// Substitution power m for an endpoint behaving like |y - c|^e; 1 means none.
inline int substitution_power(double e) {
    if (e == 0.0) return 1;
    if (!(e > -1.0)) throw std::invalid_argument("endpoint exponent must exceed -1");
    return std::max(1, static_cast<int>(std::ceil(2.0 / (1.0 + e))));
}

// Integrate f over [a, b] with y = a + u^m (from_left) or y = b - u^m, f ~ d^e
// in the offset d = |y - endpoint|. Rounding in y - endpoint makes tiny
// offsets noisy, which the hinted power law corrects only to first order; for
// e < 0 the sliver below dcut is replaced by its power-law model. dcut = (4 eps |endpoint|)^{1/(1-e)} balances the integrated noise,
// ~eps |endpoint| dcut^e, against the model error, ~dcut.
template <class F>
QuadResult integrate_substituted(const F& f, double a, double b, double e, bool from_left, const QuadConfig& cfg) {
    const int m = substitution_power(e);
    if (m == 1) return integrate(f, a, b, cfg);
    const double end = from_left ? a : b;
    const double len = b - a;
    auto g = [&](double u) {
        const double um = std::pow(u, m);
        const double y = from_left ? a + um : b - um;
        if (y == end) return 0.0;
        // y - end is exact here, but differs from um by the rounding of y; move
        // the sample back to the nominal offset along the hinted power law.
        const double d = std::fabs(y - end);
        const double fix = d != um ? std::pow(um / d, e) : 1.0;
        return m * std::pow(u, m - 1) * f(y) * fix;
    };
    const double umax = std::pow(len, 1.0 / m);
    double dcut = 0.0;
    if (e < 0.0 && end != 0.0) {
        const double noise = 4.0 * std::numeric_limits<double>::epsilon() * std::fabs(end);
        dcut = std::min(std::pow(noise, 1.0 / (1.0 - e)), 1e-6 * len);
    }
    const double ucut = dcut > 0.0 ? std::pow(dcut, 1.0 / m) : 0.0;
    QuadResult r = integrate(g, ucut, umax, cfg);
    if (ucut > 0.0) {
        // Local exponent of g ~ u^p from the offsets dcut and 4 dcut; its drift
        // against the pair (4 dcut, 16 dcut) sizes the model error when the
        // hint is not confirmed.
        const double u2 = std::pow(4.0 * dcut, 1.0 / m), u3 = std::pow(16.0 * dcut, 1.0 / m);
        const double g1 = g(ucut), g2 = g(u2), g3 = g(u3);
        const double ph = m * (1.0 + e) - 1.0;
        double p = ph, drift = 1.0;
        if (g1 != 0.0 && g2 / g1 > 0.0 && g3 / g2 > 0.0) {
            p = std::log(g2 / g1) / std::log(u2 / ucut);
            drift = std::fabs(std::log(g3 / g2) / std::log(u3 / u2) - p);
        }
        double sliver, err;
        if (std::fabs(p - ph) < 1e-3 * (ph + 1.0)) {
            // Samples agree with the hint: g = u^ph (c0 + c1 u^m), fitted at dcut and 4 dcut.
            const double q1 = g1 / std::pow(ucut, ph), q2 = g2 / std::pow(u2, ph), q3 = g3 / std::pow(u3, ph);
            const double c1 = (q2 - q1) / (3.0 * dcut), c0 = q1 - c1 * dcut;
            const double base = std::pow(ucut, ph + 1.0);
            sliver = c0 * base / (ph + 1.0) + c1 * dcut * base / (ph + 1.0 + m);
            const double miss = std::fabs(q3 - (c0 + 16.0 * c1 * dcut));
            err = std::fabs(base / (ph + 1.0)) * miss + 4.0 * std::numeric_limits<double>::epsilon() * std::fabs(sliver);
        } else {
            sliver = p > -1.0 ? g1 * ucut / (p + 1.0) : 0.0;
            err = std::fabs(sliver) * std::min(1.0, drift / (p + 1.0) + 1e-8);
        }
        r.value += sliver;
        r.err_est += err;
        r.n_eval += 3;
    }
    return r;
}

}  // namespace detail

/// Integral of f over [a, b] where f ~ |y-a|^left_exp near a and |b-y|^right_exp near b.
/// Non-zero exponents trigger y = a + u^m, m = ceil(2/(1+exp)).
template <class F>
QuadResult integrate_endpoint_singular(const F& f, double a, double b, double left_exp, double right_exp,
                                       const QuadConfig& cfg = {}) {
    const int ml = detail::substitution_power(left_exp);
    const int mr = detail::substitution_power(right_exp);
    if (ml == 1 && mr == 1) return integrate(f, a, b, cfg);
    QuadConfig half = cfg;
    half.abs_tol = 0.5 * cfg.abs_tol;
    if (mr == 1) return detail::integrate_substituted(f, a, b, left_exp, true, cfg);
    if (ml == 1) return detail::integrate_substituted(f, a, b, right_exp, false, cfg);
    const double c = 0.5 * (a + b);
    return detail::integrate_substituted(f, a, c, left_exp, true, half) +
           detail::integrate_substituted(f, c, b, right_exp, false, half);
}

template <class F>
QuadResult integrate_endpoint_singular(const F& f, const Interval& I, double left_exp, double right_exp,
                                       const QuadConfig& cfg = {}) {
    return integrate_endpoint_singular(f, I.a, I.b, left_exp, right_exp, cfg);
}

/// Power-law hints for the principal-value routines: behaviour of f at a,
/// at b, and of (f(y) - f(pole))/(y - pole) at the pole.
struct PvHints {
    double left_exp = 0.0;
    double right_exp = 0.0;
    double pole_exp = 0.0;
};

/// p.v. integral of f(y)/(pole - y) over I by singularity subtraction:
///   -int (f(y) - f(pole))/(y - pole) dy + f(pole) ln|(pole - a)/(pole - b)|.
template <class F>
QuadResult pv_cauchy(const F& f, const Interval& I, double pole, const QuadConfig& cfg = {}, PvHints hints = {}) {
    if (!I.interior(pole)) throw std::invalid_argument("pv_cauchy: pole must lie strictly inside the interval");
    const double fp = f(pole);
    auto q = [&](double y) { return y == pole ? 0.0 : (f(y) - fp) / (y - pole); };
    QuadConfig half = cfg;
    half.abs_tol = 0.5 * cfg.abs_tol;
    QuadResult r = integrate_endpoint_singular(q, I.a, pole, hints.left_exp, hints.pole_exp, half) +
                   integrate_endpoint_singular(q, pole, I.b, hints.pole_exp, hints.right_exp, half);
    r.value = -r.value + fp * std::log(std::fabs((pole - I.a) / (pole - I.b)));
    r.n_eval += 1;
    return r;
}

namespace detail {

/// Wynn epsilon extrapolation of the sequence s; returns (limit, error estimate).
inline std::pair<double, double> wynn_epsilon(const std::vector<double>& s) {
    const std::size_t n = s.size();
    if (n < 3) return {s.back(), n >= 2 ? std::fabs(s[n - 1] - s[n - 2]) : std::numeric_limits<double>::infinity()};
    // table[k][i] = eps_k^{(i)}; eps_{-1} = 0, eps_0 = s.
    std::vector<std::vector<double>> table;
    table.push_back(std::vector<double>(n + 1, 0.0));  // eps_{-1}
    table.push_back(s);
    std::vector<double> estimates;  // bottom entries of even columns
    estimates.push_back(s.back());
    for (std::size_t k = 1; k < n; ++k) {
        const auto& prev = table[k];
        const auto& prev2 = table[k - 1];
        std::vector<double> col(n - k);
        bool ok = true;
        for (std::size_t i = 0; i + k < n; ++i) {
            const double d = prev[i + 1] - prev[i];
            if (d == 0.0 || !std::isfinite(d)) {
                ok = false;
                break;
            }
            col[i] = prev2[i + 1] + 1.0 / d;
        }
        if (!ok) break;
        table.push_back(col);
        if (k % 2 == 0) estimates.push_back(col.back());
    }
    // Among even columns take the one whose last two entries agree best.
    double best = estimates.front();
    double best_err = std::fabs(s[n - 1] - s[n - 2]) + std::fabs(s[n - 2] - s[n - 3]);
    for (std::size_t k = 2; k + 1 < table.size(); k += 2) {
        const auto& col = table[k + 1];
        if (col.size() < 3) break;
        const std::size_t m = col.size();
        const double err = std::fabs(col[m - 1] - col[m - 2]) + std::fabs(col[m - 2] - col[m - 3]);
        if (err < best_err) {
            best_err = err;
            best = col[m - 1];
        }
    }
    return {best, best_err};
}

}  // namespace detail

/// p.v. integral of f(y)/(pole - y) over I as the limit of symmetric excisions
/// |y - pole| > eps_j, extrapolated with the Wynn epsilon algorithm. Flags
/// divergence when successive increments stop shrinking geometrically.
template <class F>
QuadResult pv_cauchy_excision(const F& f, const Interval& I, double pole, const QuadConfig& cfg = {},
                              PvHints hints = {}) {
    if (!I.interior(pole)) throw std::invalid_argument("pv_cauchy_excision: pole must lie strictly inside the interval");
    if (!(cfg.ratio > 0.0 && cfg.ratio < 1.0)) throw std::invalid_argument("excision ratio must lie in (0,1)");
    const double eps0 = std::min(cfg.eps0, 0.5 * std::min(pole - I.a, I.b - pole));
    QuadConfig sub = cfg;
    sub.abs_tol = 0.1 * cfg.abs_tol;
    sub.rel_tol = 0.1 * cfg.rel_tol;
    auto kernel = [&](double y) { return f(y) / (pole - y); };
    QuadResult acc = integrate_endpoint_singular(kernel, I.a, pole - eps0, hints.left_exp, 0.0, sub) +
                     integrate_endpoint_singular(kernel, pole + eps0, I.b, 0.0, hints.right_exp, sub);
    // Symmetric annulus eps_{j+1} < |y - pole| < eps_j, folded onto t = |y - pole|.
    auto annulus = [&](double t) { return (f(pole - t) - f(pole + t)) / t; };

    std::vector<double> partial{acc.value};
    double quad_err = acc.err_est;
    long n_eval = acc.n_eval;
    bool quad_ok = acc.converged;
    int stalls = 0;
    double eps = eps0;
    QuadResult out;
    double prev_est = std::numeric_limits<double>::quiet_NaN();
    int agree = 0;
    for (int j = 0; j < cfg.j_max; ++j) {
        const double next = eps * cfg.ratio;
        QuadResult ring = integrate(annulus, next, eps, sub);
        eps = next;
        n_eval += ring.n_eval;
        quad_err += ring.err_est;
        quad_ok = quad_ok && ring.converged;
        partial.push_back(partial.back() + ring.value);
        const std::size_t n = partial.size();
        if (n >= 3) {
            const double d1 = std::fabs(partial[n - 1] - partial[n - 2]);
            const double d0 = std::fabs(partial[n - 2] - partial[n - 3]);
            stalls = d1 <= 0.9 * d0 + cfg.abs_tol ? 0 : stalls + 1;
            if (stalls >= 8) {
                out.value = partial.back();
                out.err_est = std::numeric_limits<double>::infinity();
                out.n_eval = n_eval;
                out.converged = false;
                out.diverged = true;
                return out;
            }
        }
        if (n >= 6) {
            auto [est, err] = detail::wynn_epsilon(partial);
            const double tol = cfg.tolerance(est);
            agree = std::fabs(est - prev_est) <= tol && err <= tol ? agree + 1 : 0;
            prev_est = est;
            out.value = est;
            out.err_est = err + quad_err;
            if (agree >= 2) break;
        }
    }
    out.n_eval = n_eval;
    out.converged = quad_ok && agree >= 2;
    if (partial.size() < 6) {
        out.value = partial.back();
        out.err_est = quad_err + std::fabs(partial.back() - partial[partial.size() - 2]);
    }
    return out;
}

/// Semi-infinite piece of the Hilbert kernel: which side of the core it lies on.
struct Tail {
    enum class Direction { Left, Right } direction;
    double end;  // (-inf, end] for Left, [end, inf) for Right

    static Tail left(double end) { return {Direction::Left, end}; }
    static Tail right(double end) { return {Direction::Right, end}; }
};

/// int over the tail of f(y)/(pole - y) dy, via u = 1/(pole - y).
template <class F>
QuadResult tail_integral(const F& f, const Tail& tail, double pole, const QuadConfig& cfg = {}) {
    const bool right = tail.direction == Tail::Direction::Right;
    if (right ? !(pole < tail.end) : !(pole > tail.end))
        throw std::invalid_argument("tail_integral: pole must lie outside the tail");
    // dy = du/u^2 and f(y)/(pole - y) = f(y) u, so the integrand is f(pole - 1/u)/u.
    auto g = [&](double u) {
        if (u == 0.0) return 0.0;
        const double y = pole - 1.0 / u;
        if (!std::isfinite(y)) return 0.0;
        return f(y) / u;
    };
    const double u_end = 1.0 / (pole - tail.end);
    return right ? integrate(g, u_end, 0.0, cfg) : integrate(g, 0.0, u_end, cfg);
}

}  // namespace sivt
