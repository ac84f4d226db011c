#pragma once

// Named functions used by the verification suites and the tests.

#include <cstdio>
#include <string>
#include <vector>

#include "sivt/expr.hpp"
#include "sivt/quad.hpp"

namespace sivt::corpus {

namespace detail {

inline std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline FuncSpec parse(const std::string& src, Smoothness s) { return parse_function(src).with_smoothness(s); }

}  // namespace detail

inline constexpr Smoothness kSmooth{kMaxDerivativeOrder, 1.0};

/// sqrt(1 - x^2) on [-1, 1], zero outside.
inline FuncSpec semicircle() { return detail::parse("on [-1,1]: sqrt(1 - x^2); else: 0", {0, 0.5}); }

/// The semicircle annotated as smooth, for use on intervals well inside (-1, 1).
inline FuncSpec semicircle_restricted() { return semicircle().with_smoothness(kSmooth); }

/// 1/sqrt(1 - x^2) on (-1, 1).
inline FuncSpec chebyshev_weight() { return detail::parse("on [-1,1]: 1/sqrt(1 - x^2); else: 0", {-1, 0.5}); }

/// x^alpha on [0, 1], zero outside.
inline FuncSpec xalpha(double alpha) {
    return detail::parse("on [0,1]: x^" + detail::num(alpha) + "; else: 0", {0, alpha});
}

/// (x - x0)^alpha on [x0, 1], zero outside.
inline FuncSpec shifted_power(double x0, double alpha) {
    return detail::parse("on [" + detail::num(x0) + ",1]: (x - " + detail::num(x0) + ")^" + detail::num(alpha) +
                             "; else: 0",
                         {0, alpha});
}

inline FuncSpec constant(double c) { return detail::parse(detail::num(c), kSmooth); }

inline FuncSpec monomial(int n) { return detail::parse("x^" + std::to_string(n), kSmooth); }

/// (1 - x^2)^4 on [-1, 1]: C^3 across the support ends.
inline FuncSpec bump() { return detail::parse("on [-1,1]: (1 - x^2)^4; else: 0", {3, 1.0}); }

inline FuncSpec lorentzian() { return detail::parse("1/(1 + x^2)", kSmooth); }

/// 1/(2 - x), analytic on |x| < 2 with Taylor coefficients 2^{-(l+1)} at 0.
inline FuncSpec rational() { return detail::parse("1/(2 - x)", kSmooth); }

inline FuncSpec abs_power(double beta) { return detail::parse("abs(x)^" + detail::num(beta), {0, beta}); }

inline FuncSpec step() { return detail::parse("sgn(x)", {-1, 0.0}); }

inline FuncSpec sine() { return detail::parse("sin(x)", kSmooth); }

/// sgn(y)/ln|y| on [-1/4, 1/4]: continuous, but its Hilbert transform at 0 diverges.
inline FuncSpec log_counterexample() {
    return detail::parse("on [-0.25,0.25]: sgn(x)/ln(abs(x)); else: 0", {0, 0.0});
}

struct Entry {
    std::string name;
    FuncSpec f;
    Interval I;
    /// Exponents of f at a and b for the endpoint substitution.
    double left_exp;
    double right_exp;
};

/// Hoelder continuous functions with the interval they are transformed on.
inline std::vector<Entry> holder_corpus() {
    const Interval U(0.0, 1.0), S(-1.0, 1.0);
    return {
        {"semicircle", semicircle(), S, 0.5, 0.5},
        {"x^0.25", xalpha(0.25), U, 0.25, 0.0},
        {"x^0.5", xalpha(0.5), U, 0.5, 0.0},
        {"x^0.75", xalpha(0.75), U, 0.75, 0.0},
        {"shifted 0.3^0.5", shifted_power(0.3, 0.5), U, 0.0, 0.0},
        {"shifted 0.5^0.25", shifted_power(0.5, 0.25), U, 0.0, 0.0},
        {"shifted 0.7^0.75", shifted_power(0.7, 0.75), U, 0.0, 0.0},
        {"|x|^0.3", abs_power(0.3), S, 0.0, 0.0},
        {"|x|^0.5", abs_power(0.5), S, 0.0, 0.0},
        {"|x|^0.7", abs_power(0.7), S, 0.0, 0.0},
        {"|x-0.2|^0.4", detail::parse("abs(x - 0.2)^0.4", {0, 0.4}), S, 0.0, 0.0},
        {"sqrt(1-x)", detail::parse("on [-1,1]: sqrt(1 - x); else: 0", {0, 0.5}), S, 0.0, 0.5},
        {"x^2", monomial(2), U, 0.0, 0.0},
        {"x^3", monomial(3), U, 0.0, 0.0},
        {"bump", bump(), S, 0.0, 0.0},
        {"lorentzian", lorentzian(), S, 0.0, 0.0},
        {"1/(2-x)", rational(), S, 0.0, 0.0},
        {"sin(3x)", detail::parse("sin(3*x)", kSmooth), S, 0.0, 0.0},
        {"exp(x)|x|^0.5", detail::parse("exp(x)*abs(x)^0.5", {0, 0.5}), S, 0.0, 0.0},
        {"cos(x)+|x|^0.6", detail::parse("cos(x) + abs(x)^0.6", {0, 0.6}), S, 0.0, 0.0},
    };
}

}  // namespace sivt::corpus
