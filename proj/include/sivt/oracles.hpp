#pragma once

// Closed forms and series for transforms that are known exactly: the
// semicircle, the Chebyshev weight, x^alpha on (0,1) and its shifted variant,
// and the logarithmic blow-up of the C^1 counterexample.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "sivt/quad.hpp"

namespace sivt {

/// Hilbert transform of sqrt(1 - x^2) on |x| <= 1 (zero elsewhere).
inline double semicircle_hilbert(double x) {
    if (std::fabs(x) <= 1.0) return x;
    return x - std::copysign(std::sqrt(x * x - 1.0), x);
}

/// p.v. int_{-1}^{1} 1/(sqrt(1 - t^2) (x - t)) dt.
inline double chebyshev_kernel_integral(double x) {
    if (std::fabs(x) == 1.0) throw std::domain_error("chebyshev_kernel_integral is undefined at |x| = 1");
    if (std::fabs(x) < 1.0) return 0.0;
    return std::copysign(std::numbers::pi / std::sqrt(x * x - 1.0), x);
}

namespace detail {

/// (z^alpha - 1)/(z - 1), with a Taylor patch around the removable point z = 1.
inline double power_quotient(double z, double alpha) {
    const double w = z - 1.0;
    if (std::fabs(w) < 1e-4) return alpha * (1.0 + w * (alpha - 1.0) / 2.0 * (1.0 + w * (alpha - 2.0) / 3.0));
    return std::expm1(alpha * std::log(z)) / w;
}

inline QuadConfig oracle_quad() {
    QuadConfig c;
    c.abs_tol = 1e-14;
    c.rel_tol = 1e-13;
    return c;
}

}  // namespace detail

/// Constants of the x^alpha expansion:
///   C1 = int_0^1 (z^a - 1)/(z - 1) dz,  C2 = int_1^2 (z^a - 1)/(z - 1) dz,
///   S1 = sum_{k>=1} a_k/(k - a) = int_0^1 ((1+t)^a - 1) t^{-1-a} dt,
/// with a_k the binomial coefficients of (1+t)^a. S1 is obtained from its
/// integral form: the plain coefficient sum decays like k^{-2-a}.
struct GSeriesState {
    double alpha;
    double c1;
    double c2;
    double s1;
    double term_tol;
    long max_terms;

    explicit GSeriesState(double a, double tol = 1e-13, long cap = 100000)
        : alpha(a), c1(0.0), c2(0.0), s1(0.0), term_tol(tol), max_terms(cap) {
        if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("GSeriesState: alpha must lie in (0,1)");
        const QuadConfig q = detail::oracle_quad();
        auto h = [a](double z) { return detail::power_quotient(z, a); };
        c1 = integrate_endpoint_singular(h, 0.0, 1.0, a, 0.0, q).value;
        c2 = integrate(h, 1.0, 2.0, q).value;
        auto s = [a](double t) { return std::expm1(a * std::log1p(t)) * std::pow(t, -1.0 - a); };
        s1 = integrate_endpoint_singular(s, 0.0, 1.0, -a, 0.0, q).value;
    }

    /// a_k = alpha (alpha - 1) ... (alpha - k + 1)/k!.
    double binomial(long k) const {
        double c = 1.0;
        for (long i = 0; i < k; ++i) c *= (alpha - i) / (i + 1);
        return c;
    }

    /// g(0) = C1 + C2 - 1/alpha + S1.
    double g0() const { return c1 + c2 - 1.0 / alpha + s1; }
};

struct GSeriesValue {
    double value;
    long terms;
};

/// Series for g on [0, 0.45]:
///   g(u) = C1 + C2 - 1/alpha + sum_k a_k/(k - alpha) [1 - r^{k-alpha}],  r = u/(1-u),
/// evaluated as g(0) minus the geometric part in r.
inline GSeriesValue g_series(double u, const GSeriesState& st) {
    if (!(u >= 0.0 && u <= 0.45)) throw std::out_of_range("g series is valid for 0 <= u <= 0.45");
    if (u == 0.0) return {st.g0(), 0};
    const double a = st.alpha;
    const double r = u / (1.0 - u);
    const double lr = std::log(r);
    double ak = a;  // a_1
    double sum = 0.0;
    long k = 1;
    for (;; ++k) {
        if (k > st.max_terms) throw std::runtime_error("g series did not reach its term tolerance");
        const double term = ak / (k - a) * std::exp((k - a) * lr);
        sum += term;
        if (std::fabs(term) < st.term_tol && k >= 10) break;
        ak *= (a - k) / (k + 1);
    }
    return {st.g0() - sum, k};
}

inline double g_value(double u, const GSeriesState& st) { return g_series(u, st).value; }

/// g(u) for any u in (0, 1) from its defining relation
///   u^a g(u) = int_0^1 (y^a - u^a)/(y - u) dy - u^a ln(u/(1-u)) - (1-u)^a/a,
/// with the integral rewritten through z = y/u as u^a (C1 + int_1^{1/u} (z^a-1)/(z-1) dz).
inline double g_quadrature(double u, const GSeriesState& st) {
    if (!(u > 0.0 && u < 1.0)) throw std::out_of_range("g is defined for 0 < u < 1");
    const double a = st.alpha;
    auto h = [a](double z) { return detail::power_quotient(z, a); };
    const double j = integrate(h, 1.0, 1.0 / u, detail::oracle_quad()).value;
    return st.c1 + j - std::log(u / (1.0 - u)) - std::pow(1.0 - u, a) / (a * std::pow(u, a));
}

/// Series where it is valid, the defining relation beyond.
inline double g_any(double u, const GSeriesState& st) { return u <= 0.45 ? g_value(u, st) : g_quadrature(u, st); }

/// Finite Hilbert transform of y^alpha on (0,1):
///   -(1-x)^a/(pi a) - x^a g(x)/pi.
inline double xalpha_finite_hilbert(double x, const GSeriesState& st) {
    if (!(x > 0.0 && x < 1.0)) throw std::out_of_range("xalpha_finite_hilbert needs 0 < x < 1");
    const double a = st.alpha;
    return -std::pow(1.0 - x, a) / (std::numbers::pi * a) - std::pow(x, a) * g_any(x, st) / std::numbers::pi;
}

inline double xalpha_finite_hilbert(double x, double alpha) { return xalpha_finite_hilbert(x, GSeriesState(alpha)); }

/// The same transform with g always taken from the defining relation.
inline double xalpha_finite_hilbert_quadrature(double x, const GSeriesState& st) {
    if (!(x > 0.0 && x < 1.0)) throw std::out_of_range("xalpha_finite_hilbert needs 0 < x < 1");
    const double a = st.alpha;
    return -std::pow(1.0 - x, a) / (std::numbers::pi * a) - std::pow(x, a) * g_quadrature(x, st) / std::numbers::pi;
}

/// Finite Hilbert transform on (0,1) of (y - x0)^alpha for y > x0, zero below x0.
///   x > x0:  -(1-x)^a/(pi a) - (x-x0)^a g((x-x0)/(1-x0))/pi
///   x = x0:  -(1-x0)^a/(pi a)
///   x < x0:  the kernel is regular on [x0, 1]; direct quadrature.
inline double shifted_xalpha_finite_hilbert(double x, const GSeriesState& st, double x0) {
    if (!(x0 > 0.0 && x0 < 1.0)) throw std::out_of_range("shifted_xalpha_finite_hilbert needs 0 < x0 < 1");
    if (!(x < 1.0)) throw std::out_of_range("shifted_xalpha_finite_hilbert needs x < 1");
    const double a = st.alpha;
    const double pi = std::numbers::pi;
    if (x == x0) return -std::pow(1.0 - x0, a) / (pi * a);
    if (x > x0) {
        const double u = (x - x0) / (1.0 - x0);
        return -std::pow(1.0 - x, a) / (pi * a) - std::pow(x - x0, a) * g_any(u, st) / pi;
    }
    auto k = [&](double y) { return std::pow(y - x0, a) / (x - y); };
    return integrate_endpoint_singular(k, x0, 1.0, a, 0.0, detail::oracle_quad()).value / pi;
}

inline double shifted_xalpha_finite_hilbert(double x, double alpha, double x0) {
    return shifted_xalpha_finite_hilbert(x, GSeriesState(alpha), x0);
}

/// Closed form (2/pi) ln(ln(1/eps)/ln 4) of the truncated counterexample integral.
inline double divergence_closed_form(double eps) {
    if (!(eps > 0.0 && eps < 0.25)) throw std::out_of_range("divergence probe needs 0 < eps < 1/4");
    return 2.0 / std::numbers::pi * std::log(std::log(1.0 / eps) / std::log(4.0));
}

/// (1/pi) int_eps^{1/4} -2/(t ln t) dt by quadrature in s = ln t. This is the
/// excised principal-value integral of sgn(y)/ln|y| at 0, which grows without
/// bound as eps -> 0.
inline QuadResult divergence_probe(double eps, const QuadConfig& cfg = detail::oracle_quad()) {
    if (!(eps > 0.0 && eps < 0.25)) throw std::out_of_range("divergence probe needs 0 < eps < 1/4");
    // dt = t ds, so -2/(t ln t) dt = -2/s ds.
    auto k = [](double s) { return -2.0 / s; };
    return integrate(k, std::log(eps), std::log(0.25), cfg).scaled(1.0 / std::numbers::pi);
}

}  // namespace sivt
