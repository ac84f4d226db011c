#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "sivt/corpus.hpp"
#include "sivt/operators.hpp"
#include "sivt/oracles.hpp"

using namespace sivt;
using std::numbers::pi;

namespace {

/// T_k of e^y on [a, b] at x from the Taylor series of e^y about x:
///   k! e^x sum_{m>k} ((b-x)^{m-k} - (a-x)^{m-k}) / ((m-k) m!).
double tk_exp_series(double a, double b, double x, int k) {
    double sum = 0.0, mfact = 1.0;
    for (int m = 1; m <= k; ++m) mfact *= m;
    for (int m = k + 1; m < 80; ++m) {
        mfact *= m;
        sum += (std::pow(b - x, m - k) - std::pow(a - x, m - k)) / ((m - k) * mfact);
    }
    double kf = 1.0;
    for (int i = 2; i <= k; ++i) kf *= i;
    return kf * std::exp(x) * sum;
}

const Interval U(0.0, 1.0);
const Interval S(-1.0, 1.0);

}  // namespace

TEST(TaylorPoly, CubeAboutOne) {
    const Polynomial p = taylor_poly(parse_function("x^3"), 1.0, 2);
    ASSERT_EQ(p.degree(), 2);
    for (double y : {-1.0, 0.0, 0.5, 2.0}) EXPECT_NEAR(p(y), 1 + 3 * (y - 1) + 3 * (y - 1) * (y - 1), 1e-13);
}

TEST(TaylorPoly, OrderZeroIsConstant) {
    const Polynomial p = taylor_poly(corpus::sine(), 0.7, 0);
    EXPECT_EQ(p(-5.0), std::sin(0.7));
    EXPECT_EQ(p(3.0), std::sin(0.7));
}

TEST(TaylorPoly, ReproducesPolynomials) {
    const FuncSpec f = parse_function("2*x^3 - x^2 + 4*x - 1");
    const Polynomial p = taylor_poly(f, -0.4, 3);
    for (int i = 0; i < 10; ++i) {
        const double y = -2.0 + 0.45 * i;
        EXPECT_NEAR(p(y), f(y), 1e-12 * std::max(1.0, std::fabs(f(y))));
    }
}

TEST(TaylorPoly, RefusesBreakpoints) {
    EXPECT_THROW(taylor_poly(corpus::semicircle(), 1.0, 1), std::invalid_argument);
}

TEST(ApplyT, KillsConstants) {
    for (double x : {0.01, 0.3, 0.77, 0.99}) EXPECT_LE(std::fabs(apply_T(corpus::constant(3.5), U, x).value), 1e-12);
}

TEST(ApplyT, IdentityGivesLength) {
    for (double x : {0.1, 0.5, 0.9}) EXPECT_NEAR(apply_T(parse_function("x"), U, x).value, 1.0, 1e-12);
}

TEST(ApplyT, SquareAtPointThree) { EXPECT_NEAR(apply_T(corpus::monomial(2), U, 0.3).value, 0.8, 1e-10); }

TEST(ApplyT, HoelderInputsAgainstReferenceQuadrature) {
    // References from 40-digit quadrature of the bounded difference quotient.
    EXPECT_NEAR(apply_T(corpus::xalpha(0.5), U, 0.25).value, 0.90138771133189031, 1e-10);
    EXPECT_NEAR(apply_T(corpus::semicircle(), S, 0.5).value, -0.61937017589855065, 1e-10);
}

TEST(ApplyT, ExactForPolynomialAtManyPoints) {
    // T of y^3 on [0,1]: 1/3 + x/2 + x^2.
    for (double x : {0.05, 0.25, 0.5, 0.75, 0.95})
        EXPECT_NEAR(apply_T(corpus::monomial(3), U, x).value, 1.0 / 3 + x / 2 + x * x, 1e-12);
}

TEST(ApplyT, PointMustBeInterior) {
    EXPECT_THROW(apply_T(corpus::monomial(2), U, 0.0), std::invalid_argument);
    EXPECT_THROW(apply_T(corpus::monomial(2), U, 1.5), std::invalid_argument);
}

TEST(ApplyT, ReportedErrorCoversTheShiftedPowerNearItsOnset) {
    const FuncSpec f = corpus::shifted_power(0.5, 0.5);
    for (double d : {4e-6, 1e-5, 1e-3, -1e-5}) {
        const double x = 0.5 + d;
        const QuadResult r = finite_hilbert(f, U, x);
        EXPECT_TRUE(r.converged) << d;
        EXPECT_NEAR(r.value, shifted_xalpha_finite_hilbert(x, 0.5, 0.5), std::max(2.0 * r.err_est, 1e-12)) << d;
    }
}

TEST(ApplyTk, PolynomialsOfDegreeAtMostKVanish) {
    const FuncSpec p = parse_function("3*x^2 - x + 2").with_smoothness(corpus::kSmooth);
    for (int k = 2; k <= 4; ++k)
        for (double x : {0.2, 0.6}) EXPECT_LE(std::fabs(apply_Tk(p, U, x, k).value), 1e-10) << k;
}

TEST(ApplyTk, SquareOrderOne) {
    for (double x : {0.1, 0.5, 0.85}) EXPECT_NEAR(apply_Tk(corpus::monomial(2), U, x, 1).value, 1.0, 1e-10);
}

TEST(ApplyTk, CubeOrderTwo) {
    for (double x : {0.1, 0.5, 0.85}) EXPECT_NEAR(apply_Tk(corpus::monomial(3), U, x, 2).value, 2.0, 1e-10);
}

TEST(ApplyTk, ExponentialAgainstSeries) {
    const FuncSpec f = parse_function("exp(x)").with_smoothness(corpus::kSmooth);
    for (int k = 1; k <= 6; ++k)
        for (double x : {0.1, 0.4, 0.9}) {
            const QuadResult r = apply_Tk(f, U, x, k);
            EXPECT_NEAR(r.value, tk_exp_series(0.0, 1.0, x, k), 1e-11) << "k=" << k << " x=" << x;
        }
    EXPECT_NEAR(tk_exp_series(0.0, 1.0, 0.4, 1), 0.77693959480248246, 1e-15);
}

TEST(ApplyTk, HoelderDerivative) {
    // |y|^1.5 is C^{1,1/2}; reference from a Taylor window plus 40-digit quadrature outside it.
    const QuadResult r = apply_Tk(parse_function("abs(x)^1.5").with_smoothness({1, 0.5}), S, 0.3, 1);
    EXPECT_NEAR(r.value, 1.9034756647566513, 1e-9);
}

TEST(ApplyTk, ZeroOrderIsT) {
    const FuncSpec f = corpus::sine();
    EXPECT_EQ(apply_Tk(f, S, 0.2, 0).value, apply_T(f, S, 0.2).value);
}

TEST(ApplyTk, RejectsInsufficientSmoothnessAndBreakpoints) {
    EXPECT_THROW(apply_Tk(corpus::semicircle(), S, 0.2, 1), std::invalid_argument);
    const FuncSpec pw = parse_function("on [0,0.5]: x^2; on [0.5,1]: x").with_smoothness(corpus::kSmooth);
    EXPECT_THROW(apply_Tk(pw, U, 0.5, 1), std::invalid_argument);
    EXPECT_THROW(apply_Tk(corpus::monomial(2), U, 0.5, -1), std::invalid_argument);
}

TEST(FiniteHilbert, SemicircleInterior) {
    EXPECT_NEAR(finite_hilbert(corpus::semicircle(), S, 0.5).value, 0.5, 1e-6);
}

TEST(FiniteHilbert, ConstantIsLogTerm) {
    const Interval I(-0.5, 2.0);
    for (double x : {-0.3, 0.4, 1.9}) {
        const double expected = 1.7 / pi * std::log(std::fabs((x - I.a) / (x - I.b)));
        EXPECT_NEAR(finite_hilbert(corpus::constant(1.7), I, x).value, expected, 1e-12);
    }
}

TEST(FiniteHilbert, SqrtAgainstReference) {
    // 40-digit reference quadrature.
    EXPECT_NEAR(finite_hilbert(corpus::xalpha(0.5), U, 0.25).value, -0.461770196084551, 1e-12);
}

TEST(FiniteHilbert, MarginIsEnforced) {
    EXPECT_THROW(finite_hilbert(corpus::monomial(2), U, 1e-4), std::invalid_argument);
    OpConfig cfg;
    cfg.margin = 1e-5;
    EXPECT_NO_THROW(finite_hilbert(corpus::monomial(2), U, 1e-4, cfg));
}

TEST(GlobalHilbert, Semicircle) {
    EXPECT_NEAR(global_hilbert(corpus::semicircle(), S, 0.5).value, 0.5, 1e-6);
    EXPECT_NEAR(global_hilbert(corpus::semicircle(), Interval(1.0, 3.0), 2.0).value, 2.0 - std::sqrt(3.0), 1e-6);
    EXPECT_NEAR(global_hilbert(corpus::semicircle(), S, -2.0).value, -2.0 + std::sqrt(3.0), 1e-6);
}

TEST(GlobalHilbert, LorentzianIsXOverOnePlusXSquared) {
    EXPECT_NEAR(global_hilbert(corpus::lorentzian(), Interval(0.0, 2.0), 1.0).value, 0.5, 1e-5);
    for (double x : {-0.7, 0.0, 0.3})
        EXPECT_NEAR(global_hilbert(corpus::lorentzian(), S, x).value, x / (1 + x * x), 1e-8) << x;
}

TEST(GlobalHilbert, SupportBoundaryIsRejected) {
    EXPECT_THROW(global_hilbert(corpus::semicircle(), Interval(0.5, 1.5), 1.0), std::invalid_argument);
}

TEST(TransformGrid, ShapeAndOrder) {
    const TransformGrid g = transform_grid(corpus::semicircle(), S, "finite-hilbert", 41, 0);
    ASSERT_EQ(g.x.size(), 41u);
    EXPECT_TRUE(g.all_converged());
    for (std::size_t i = 1; i < g.x.size(); ++i) EXPECT_LT(g.x[i - 1], g.x[i]);
    for (std::size_t i = 0; i < g.x.size(); ++i) EXPECT_NEAR(g.value[i], g.x[i], 1e-5);
    EXPECT_THROW(transform_grid(corpus::semicircle(), S, "nope", 5, 0), std::invalid_argument);
    EXPECT_THROW(transform_grid(corpus::semicircle(), S, "T", 1, 0), std::invalid_argument);
}

TEST(DkTf, CubeSecondDerivative) {
    const std::vector<double> grid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    const ProbeReport r = dk_Tf_check(corpus::monomial(3), U, grid, 2);
    EXPECT_TRUE(r.pass);
    EXPECT_LE(r.max_measured(), 1e-5);
}

TEST(DkTf, SemicircleRestrictedFirstDerivative) {
    const std::vector<double> grid = {-0.7, -0.35, 0.0, 0.35, 0.7};
    const ProbeReport r = dk_Tf_check(corpus::semicircle_restricted(), Interval(-0.9, 0.9), grid, 1);
    EXPECT_LE(r.max_measured(), 1e-4);
}

TEST(DkTf, ConstantBothSidesZero) {
    const std::vector<double> grid = {0.25, 0.5, 0.75};
    for (int k = 1; k <= 3; ++k) EXPECT_LE(dk_Tf_check(corpus::constant(2.0), U, grid, k).max_measured(), 1e-9);
}

TEST(Recursion, CubeRecordsTheUncorrectedDiscrepancy) {
    for (double x : {0.1, 0.5, 0.9}) {
        const ProbeReport r = recursion_discrepancy(corpus::monomial(3), U, x, 1);
        EXPECT_NEAR(r.find("T_{k+1} f")->measured, 2.0, 1e-8);
        EXPECT_NEAR(r.find("T_k f'")->measured, 3.0, 1e-8);
        EXPECT_NEAR(r.find("discrepancy")->measured, -1.0, 1e-8);
        EXPECT_NEAR(r.find("boundary term")->measured, -1.0, 1e-12);
        EXPECT_LE(r.find("residual")->measured, 1e-9);
        EXPECT_TRUE(r.pass);
    }
}

TEST(Recursion, LowDegreePolynomialAllZero) {
    const ProbeReport r = recursion_discrepancy(parse_function("2*x - 1").with_smoothness(corpus::kSmooth), U, 0.4, 1);
    EXPECT_LE(std::fabs(r.find("T_{k+1} f")->measured), 1e-10);
    EXPECT_LE(std::fabs(r.find("T_k f'")->measured), 1e-10);
    EXPECT_LE(std::fabs(r.find("boundary term")->measured), 1e-12);
}

TEST(Recursion, RationalAtZero) {
    EXPECT_LE(recursion_discrepancy(corpus::rational(), S, 0.0, 1).find("residual")->measured, 1e-8);
}

TEST(Commute, Lorentzian) {
    const std::vector<double> grid = {-0.45, -0.2, 0.0, 0.2, 0.45};
    EXPECT_LE(commute_check(corpus::lorentzian(), S, grid).max_measured(), 1e-4);
}

TEST(Commute, BumpAndZero) {
    const std::vector<double> grid = {-0.45, 0.1, 0.45};
    EXPECT_LE(commute_check(corpus::bump(), S, grid).max_measured(), 1e-4);
    EXPECT_EQ(commute_check(corpus::constant(0.0), S, grid).max_measured(), 0.0);
}
