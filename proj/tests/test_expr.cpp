#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "sivt/corpus.hpp"
#include "sivt/expr.hpp"

using namespace sivt;

TEST(Parse, SemicircleHasOnePieceAndZeroElse) {
    const FuncSpec f = parse_function("on [-1,1]: sqrt(1 - x^2); else: 0");
    ASSERT_EQ(f.pieces().size(), 1u);
    EXPECT_EQ(f.pieces()[0].lo, -1.0);
    EXPECT_EQ(f.pieces()[0].hi, 1.0);
    EXPECT_TRUE(f.otherwise().is_constant(0.0));
    EXPECT_EQ(f(0.0), 1.0);
    EXPECT_EQ(f(2.0), 0.0);
    EXPECT_NEAR(f(0.6), 0.8, 1e-15);
}

TEST(Parse, ShiftedPower) {
    const FuncSpec f = parse_function("on [0.3,1]: (x - 0.3)^0.5; else: 0");
    EXPECT_EQ(f(0.3), 0.0);
    EXPECT_NEAR(f(0.55), 0.5, 1e-15);
    EXPECT_EQ(f(0.1), 0.0);
}

TEST(Parse, PiecesAreSortedAscending) {
    const FuncSpec f = parse_function("on [2,3]: 5; on [0,1]: x; else: -1");
    ASSERT_EQ(f.pieces().size(), 2u);
    EXPECT_EQ(f.pieces()[0].lo, 0.0);
    EXPECT_EQ(f(2.5), 5.0);
    EXPECT_EQ(f(1.5), -1.0);
}

TEST(Parse, SharedEndpointGoesToTheLeftPiece) {
    const FuncSpec f = parse_function("on [0,1]: 1; on [1,2]: 2");
    EXPECT_EQ(f(1.0), 1.0);
    EXPECT_EQ(f.eval_side(1.0, Side::Right), 2.0);
    EXPECT_TRUE(f.is_breakpoint(1.0));
}

TEST(Parse, WholeLineExpression) {
    const FuncSpec f = parse_function("exp(x) * cos(x) + pi");
    EXPECT_NEAR(f(0.5), std::exp(0.5) * std::cos(0.5) + M_PI, 1e-15);
    EXPECT_TRUE(f.pieces().empty() || f.pieces().size() == 1u);
}

TEST(Parse, Precedence) {
    EXPECT_EQ(parse_function("-x^2")(3.0), -9.0);
    EXPECT_EQ(parse_function("2*3^2")(0.0), 18.0);
    EXPECT_EQ(parse_function("1 - 2 - 3")(0.0), -4.0);
    EXPECT_EQ(parse_function("8/4/2")(0.0), 1.0);
    EXPECT_EQ(parse_function("pow(x, 3)")(2.0), 8.0);
}

TEST(Parse, UnclosedIntervalIsASyntaxError) {
    try {
        parse_function("on [0,1: x");
        FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 1);
        EXPECT_GT(e.column(), 1);
    }
}

TEST(Parse, RejectsOverlapsAndUnknownNames) {
    EXPECT_THROW(parse_function("on [0,2]: x; on [1,3]: x"), ParseError);
    EXPECT_THROW(parse_function("foo(x)"), ParseError);
    EXPECT_THROW(parse_function("x + y"), ParseError);
    EXPECT_THROW(parse_function("pow(x, x)"), ParseError);
    EXPECT_THROW(parse_function("x +"), ParseError);
}

TEST(Eval, DomainErrors) {
    EXPECT_THROW(parse_function("sqrt(x)")(-1.0), DomainError);
    EXPECT_THROW(parse_function("ln(x)")(0.0), DomainError);
    EXPECT_THROW(parse_function("x^0.5")(-0.25), DomainError);
    EXPECT_EQ(parse_function("x^3")(-2.0), -8.0);
}

TEST(Eval, SignOfZeroIsZero) { EXPECT_EQ(parse_function("sgn(x)")(0.0), 0.0); }

TEST(Differentiate, SqrtOneMinusSquare) {
    const FuncSpec d = differentiate(parse_function("sqrt(1 - x^2)"), 1);
    for (double x : {-0.7, -0.2, 0.0, 0.4, 0.9}) EXPECT_NEAR(d(x), -x / std::sqrt(1 - x * x), 1e-14);
}

TEST(Differentiate, SecondDerivativeOfCube) {
    const FuncSpec d = differentiate(parse_function("x^3"), 2);
    for (double x : {-2.0, 0.5, 3.0}) EXPECT_NEAR(d(x), 6.0 * x, 1e-13);
}

TEST(Differentiate, OrderZeroIsIdentity) {
    const FuncSpec f = corpus::semicircle();
    const FuncSpec d = differentiate(f, 0);
    for (double x : {-1.5, -0.3, 0.0, 0.8}) EXPECT_EQ(d(x), f(x));
}

TEST(Differentiate, CapIsEnforced) {
    EXPECT_THROW(differentiate(parse_function("sin(x)"), kMaxDerivativeOrder + 1), std::invalid_argument);
    EXPECT_NO_THROW(differentiate(parse_function("sin(x)"), kMaxDerivativeOrder));
}

TEST(Differentiate, PiecewiseKeepsPieces) {
    const FuncSpec d = differentiate(corpus::bump(), 1);
    ASSERT_EQ(d.pieces().size(), 1u);
    EXPECT_EQ(d(2.0), 0.0);
    EXPECT_NEAR(d(0.5), 4 * std::pow(0.75, 3) * -1.0, 1e-14);
}

namespace {

std::vector<FuncSpec> printable_corpus() {
    std::vector<FuncSpec> out;
    for (const auto& e : corpus::holder_corpus()) out.push_back(e.f);
    out.push_back(corpus::chebyshev_weight());
    out.push_back(corpus::log_counterexample());
    out.push_back(corpus::step());
    return out;
}

double safe(const FuncSpec& f, double x) {
    try {
        return f(x);
    } catch (const DomainError&) {
        return std::nan("");
    }
}

}  // namespace

TEST(Property, PrintParseRoundTrip) {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (const FuncSpec& f : printable_corpus()) {
        const FuncSpec g = parse_function(f.str());
        for (int i = 0; i < 1000; ++i) {
            const double x = u(rng);
            const double a = safe(f, x), b = safe(g, x);
            if (std::isnan(a)) {
                EXPECT_TRUE(std::isnan(b)) << f.str() << " at " << x;
                continue;
            }
            EXPECT_NEAR(a, b, 1e-15 * std::max(1.0, std::fabs(a))) << f.str() << " at " << x;
        }
    }
}

TEST(Property, DerivativeMatchesCentralDifference) {
    std::mt19937_64 rng(7);
    for (const auto& e : corpus::holder_corpus()) {
        const FuncSpec d = differentiate(e.f, 1);
        const auto bps = e.f.breakpoints();
        std::uniform_real_distribution<double> u(e.I.a, e.I.b);
        int checked = 0;
        while (checked < 100) {
            const double x = u(rng);
            bool near_kink = false;
            for (double b : bps) near_kink = near_kink || std::fabs(x - b) < 1e-2;
            // Corpus members with |x - c|^beta terms have kinks that are not piece breakpoints.
            for (double c : {0.0, 0.2}) near_kink = near_kink || std::fabs(x - c) < 1e-2;
            if (near_kink) continue;
            const double h = 1e-6;
            const double fd = (e.f(x + h) - e.f(x - h)) / (2 * h);
            const double dv = d(x);
            EXPECT_NEAR(dv, fd, 1e-6 * std::max(1.0, std::fabs(dv))) << e.name << " at " << x;
            ++checked;
        }
    }
}

TEST(Substitute, AffineCompositionMapsPieces) {
    const FuncSpec f = corpus::semicircle();
    const FuncSpec g = compose_affine(f, 2.0, 1.0);  // y -> f(2y + 1)
    for (double y : {-1.2, -0.9, -0.5, -0.1, 0.3})
        EXPECT_NEAR(g(y), f(2 * y + 1), 1e-15) << y;
    ASSERT_EQ(g.pieces().size(), 1u);
    EXPECT_DOUBLE_EQ(g.pieces()[0].lo, -1.0);
    EXPECT_DOUBLE_EQ(g.pieces()[0].hi, 0.0);

    const FuncSpec r = compose_affine(parse_function("on [0,1]: x; else: 0"), -1.0, 0.0);
    EXPECT_EQ(r(-0.25), 0.25);
    EXPECT_EQ(r(0.25), 0.0);
}

TEST(Support, DeclaredSupportCoversNonzeroPieces) {
    const Support s = corpus::semicircle().support();
    EXPECT_EQ(s.lo, -1.0);
    EXPECT_EQ(s.hi, 1.0);
    EXPECT_FALSE(corpus::lorentzian().support().bounded());
}
