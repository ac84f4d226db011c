#pragma once

// Expression trees and piecewise function definitions.
//
// A FuncSpec is a list of closed pieces [lo, hi] each carrying an expression
// in the single variable x, plus an "else" expression used everywhere else.
// Expressions are immutable DAGs; differentiation is symbolic with light
// constant folding so that repeated derivatives stay small.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sivt {

/// Raised when an expression is evaluated outside its real domain.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class ParseError : public std::runtime_error {
public:
    enum class Kind { Syntax, Overlap, UnknownIdentifier };

    ParseError(Kind kind, const std::string& msg, int line, int column)
        : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
          kind_(kind), line_(line), column_(column) {}

    Kind kind() const noexcept { return kind_; }
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    Kind kind_;
    int line_;
    int column_;
};

/// Highest derivative order handed out by differentiate() unless overridden.
inline constexpr int kMaxDerivativeOrder = 8;

namespace expr {

enum class Op : unsigned char { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Sqrt, Ln, Abs, Sgn, Exp, Sin, Cos };

struct Node;

class Expr {
public:
    Expr() : Expr(constant(0.0)) {}

    static Expr constant(double v);
    static Expr var();

    double operator()(double x) const;
    Expr derivative() const;
    std::string str() const;

    Op op() const noexcept;
    double value() const noexcept;
    const Expr& lhs() const noexcept;
    const Expr& rhs() const noexcept;

    bool is_constant() const noexcept { return op() == Op::Const; }
    bool is_constant(double v) const noexcept { return is_constant() && value() == v; }
    /// Number of distinct nodes reachable from this one (shared nodes counted once).
    std::size_t size() const;

    friend Expr make(Op op, Expr a, Expr b);
    friend Expr make(Op op, Expr a);

private:
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    explicit Expr(std::nullptr_t) {}
    std::shared_ptr<const Node> node_;
};

struct Node {
    Op op;
    double value = 0.0;
    Expr a;
    Expr b;
};

// Leaves (and the unused slot of unary nodes) hold null children; building
// them through Expr() would recurse.
inline Expr Expr::constant(double v) {
    return Expr(std::make_shared<const Node>(Node{Op::Const, v, Expr(nullptr), Expr(nullptr)}));
}
inline Expr Expr::var() { return Expr(std::make_shared<const Node>(Node{Op::Var, 0.0, Expr(nullptr), Expr(nullptr)})); }

inline Op Expr::op() const noexcept { return node_->op; }
inline double Expr::value() const noexcept { return node_->value; }
inline const Expr& Expr::lhs() const noexcept { return node_->a; }
inline const Expr& Expr::rhs() const noexcept { return node_->b; }

inline Expr make(Op op, Expr a, Expr b) {
    return Expr(std::make_shared<const Node>(Node{op, 0.0, std::move(a), std::move(b)}));
}
inline Expr make(Op op, Expr a) {
    return Expr(std::make_shared<const Node>(Node{op, 0.0, std::move(a), Expr(nullptr)}));
}

namespace detail {

inline bool is_integer(double v) { return std::isfinite(v) && std::floor(v) == v; }

inline double checked_pow(double base, double e) {
    if (base < 0.0 && !is_integer(e))
        throw DomainError("pow: negative base with non-integer exponent");
    if (base == 0.0 && e < 0.0)
        throw DomainError("pow: zero base with negative exponent");
    return std::pow(base, e);
}

inline double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

inline double Expr::operator()(double x) const {
    const Node& n = *node_;
    switch (n.op) {
    case Op::Const: return n.value;
    case Op::Var: return x;
    case Op::Neg: return -n.a(x);
    case Op::Add: return n.a(x) + n.b(x);
    case Op::Sub: return n.a(x) - n.b(x);
    case Op::Mul: return n.a(x) * n.b(x);
    case Op::Div: {
        const double den = n.b(x);
        if (den == 0.0) throw DomainError("division by zero");
        return n.a(x) / den;
    }
    case Op::Pow: return detail::checked_pow(n.a(x), n.b.value());
    case Op::Sqrt: {
        const double u = n.a(x);
        if (u < 0.0) throw DomainError("sqrt of negative argument");
        return std::sqrt(u);
    }
    case Op::Ln: {
        const double u = n.a(x);
        if (!(u > 0.0)) throw DomainError("ln of non-positive argument");
        return std::log(u);
    }
    case Op::Abs: return std::fabs(n.a(x));
    case Op::Sgn: return detail::sgn(n.a(x));
    case Op::Exp: return std::exp(n.a(x));
    case Op::Sin: return std::sin(n.a(x));
    case Op::Cos: return std::cos(n.a(x));
    }
    return 0.0;
}

// Simplifying constructors. Constants are folded and 0/1 identities removed;
// nothing more clever than that.
inline Expr operator-(const Expr& a) {
    if (a.is_constant()) return Expr::constant(-a.value());
    if (a.op() == Op::Neg) return a.lhs();
    return make(Op::Neg, a);
}

inline Expr operator+(const Expr& a, const Expr& b) {
    if (a.is_constant() && b.is_constant()) return Expr::constant(a.value() + b.value());
    if (a.is_constant(0.0)) return b;
    if (b.is_constant(0.0)) return a;
    if (b.op() == Op::Neg) return make(Op::Sub, a, b.lhs());
    return make(Op::Add, a, b);
}

inline Expr operator-(const Expr& a, const Expr& b) {
    if (a.is_constant() && b.is_constant()) return Expr::constant(a.value() - b.value());
    if (b.is_constant(0.0)) return a;
    if (a.is_constant(0.0)) return -b;
    return make(Op::Sub, a, b);
}

inline Expr operator*(const Expr& a, const Expr& b) {
    if (a.is_constant() && b.is_constant()) return Expr::constant(a.value() * b.value());
    if (a.is_constant(0.0) || b.is_constant(0.0)) return Expr::constant(0.0);
    if (a.is_constant(1.0)) return b;
    if (b.is_constant(1.0)) return a;
    if (a.is_constant(-1.0)) return -b;
    if (b.is_constant(-1.0)) return -a;
    if (b.is_constant()) return b * a;
    if (a.is_constant() && b.op() == Op::Mul && b.lhs().is_constant())
        return Expr::constant(a.value() * b.lhs().value()) * b.rhs();
    if (a.op() == Op::Neg) return -(a.lhs() * b);
    if (b.op() == Op::Neg) return -(a * b.lhs());
    return make(Op::Mul, a, b);
}

inline Expr operator/(const Expr& a, const Expr& b) {
    if (a.is_constant() && b.is_constant() && b.value() != 0.0) return Expr::constant(a.value() / b.value());
    if (a.is_constant(0.0)) return Expr::constant(0.0);
    if (b.is_constant(1.0)) return a;
    return make(Op::Div, a, b);
}

inline Expr pow(const Expr& base, double e) {
    if (e == 0.0) return Expr::constant(1.0);
    if (e == 1.0) return base;
    if (base.is_constant()) return Expr::constant(detail::checked_pow(base.value(), e));
    return make(Op::Pow, base, Expr::constant(e));
}

inline Expr call(Op op, const Expr& a) {
    if (a.is_constant()) {
        // Fold only where the result is a plain number; domain errors surface at parse time.
        return Expr::constant(make(op, a)(0.0));
    }
    return make(op, a);
}

inline Expr sqrt(const Expr& a) { return call(Op::Sqrt, a); }
inline Expr ln(const Expr& a) { return call(Op::Ln, a); }
inline Expr abs(const Expr& a) { return call(Op::Abs, a); }
inline Expr sgn(const Expr& a) { return call(Op::Sgn, a); }
inline Expr exp(const Expr& a) { return call(Op::Exp, a); }
inline Expr sin(const Expr& a) { return call(Op::Sin, a); }
inline Expr cos(const Expr& a) { return call(Op::Cos, a); }

/// e with every occurrence of x replaced by inner.
inline Expr substitute(const Expr& e, const Expr& inner) {
    switch (e.op()) {
    case Op::Const: return e;
    case Op::Var: return inner;
    case Op::Neg: return -substitute(e.lhs(), inner);
    case Op::Add: return substitute(e.lhs(), inner) + substitute(e.rhs(), inner);
    case Op::Sub: return substitute(e.lhs(), inner) - substitute(e.rhs(), inner);
    case Op::Mul: return substitute(e.lhs(), inner) * substitute(e.rhs(), inner);
    case Op::Div: return substitute(e.lhs(), inner) / substitute(e.rhs(), inner);
    case Op::Pow: return pow(substitute(e.lhs(), inner), e.rhs().value());
    default: return call(e.op(), substitute(e.lhs(), inner));
    }
}

inline Expr Expr::derivative() const {
    const Expr& u = lhs();
    switch (op()) {
    case Op::Const: return constant(0.0);
    case Op::Var: return constant(1.0);
    case Op::Neg: return -u.derivative();
    case Op::Add: return u.derivative() + rhs().derivative();
    case Op::Sub: return u.derivative() - rhs().derivative();
    case Op::Mul: return u.derivative() * rhs() + u * rhs().derivative();
    case Op::Div: {
        const Expr& v = rhs();
        if (v.is_constant()) return u.derivative() / v;
        return (u.derivative() * v - u * v.derivative()) / pow(v, 2.0);
    }
    case Op::Pow: {
        const double e = rhs().value();
        return Expr::constant(e) * pow(u, e - 1.0) * u.derivative();
    }
    // sqrt(u)' is written through pow so that higher derivatives fold into powers.
    case Op::Sqrt: return Expr::constant(0.5) * pow(u, -0.5) * u.derivative();
    case Op::Ln: return u.derivative() / u;
    case Op::Abs: return sgn(u) * u.derivative();
    case Op::Sgn: return constant(0.0);
    case Op::Exp: return *this * u.derivative();
    case Op::Sin: return cos(u) * u.derivative();
    case Op::Cos: return -(sin(u) * u.derivative());
    }
    return constant(0.0);
}

inline std::string Expr::str() const {
    switch (op()) {
    case Op::Const: {
        const double v = value();
        return v < 0.0 || (v == 0.0 && std::signbit(v)) ? "(" + detail::fmt17(v) + ")" : detail::fmt17(v);
    }
    case Op::Var: return "x";
    case Op::Neg: return "(-" + lhs().str() + ")";
    case Op::Add: return "(" + lhs().str() + " + " + rhs().str() + ")";
    case Op::Sub: return "(" + lhs().str() + " - " + rhs().str() + ")";
    case Op::Mul: return "(" + lhs().str() + " * " + rhs().str() + ")";
    case Op::Div: return "(" + lhs().str() + " / " + rhs().str() + ")";
    case Op::Pow: return "pow(" + lhs().str() + ", " + rhs().str() + ")";
    case Op::Sqrt: return "sqrt(" + lhs().str() + ")";
    case Op::Ln: return "ln(" + lhs().str() + ")";
    case Op::Abs: return "abs(" + lhs().str() + ")";
    case Op::Sgn: return "sgn(" + lhs().str() + ")";
    case Op::Exp: return "exp(" + lhs().str() + ")";
    case Op::Sin: return "sin(" + lhs().str() + ")";
    case Op::Cos: return "cos(" + lhs().str() + ")";
    }
    return {};
}

inline std::size_t Expr::size() const {
    std::vector<const Node*> seen;
    std::vector<const Node*> stack{node_.get()};
    while (!stack.empty()) {
        const Node* n = stack.back();
        stack.pop_back();
        if (std::find(seen.begin(), seen.end(), n) != seen.end()) continue;
        seen.push_back(n);
        if (n->op != Op::Const && n->op != Op::Var) {
            stack.push_back(n->a.node_.get());
            if (n->b.node_) stack.push_back(n->b.node_.get());
        }
    }
    return seen.size();
}

}  // namespace expr

enum class Side { Left, Right };

struct Piece {
    double lo;
    double hi;
    expr::Expr body;
};

/// Claimed local smoothness: f in C^{k,alpha}. k < 0 means "not annotated".
struct Smoothness {
    int k = -1;
    double alpha = 0.5;
};

/// Closed hull of the region where f may be nonzero. Empty when lo > hi.
struct Support {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    bool empty() const noexcept { return lo > hi; }
    bool bounded() const noexcept { return std::isfinite(lo) && std::isfinite(hi); }
    bool contains(double x) const noexcept { return lo <= x && x <= hi; }
};

class FuncSpec {
public:
    FuncSpec() = default;

    /// Pieces are sorted by lo; overlapping pieces (beyond shared endpoints) are rejected.
    FuncSpec(std::vector<Piece> pieces, expr::Expr otherwise, Smoothness smoothness = {})
        : pieces_(std::move(pieces)), otherwise_(std::move(otherwise)), smoothness_(smoothness) {
        std::sort(pieces_.begin(), pieces_.end(), [](const Piece& p, const Piece& q) { return p.lo < q.lo; });
        for (const Piece& p : pieces_)
            if (!(p.lo < p.hi)) throw std::invalid_argument("piece interval must satisfy lo < hi");
        for (std::size_t i = 1; i < pieces_.size(); ++i)
            if (pieces_[i].lo < pieces_[i - 1].hi) throw std::invalid_argument("overlapping pieces");
    }

    /// One piece covering the whole real line.
    static FuncSpec whole_line(expr::Expr e, Smoothness smoothness = {}) {
        constexpr double inf = std::numeric_limits<double>::infinity();
        return FuncSpec({Piece{-inf, inf, std::move(e)}}, expr::Expr::constant(0.0), smoothness);
    }

    double operator()(double x) const { return body_at(x)(x); }

    /// One-sided evaluation: the expression governing (x - 0, x] or [x, x + 0).
    double eval_side(double x, Side side) const { return body_at(x, side)(x); }

    /// Expression in force at x (left piece wins at shared endpoints).
    const expr::Expr& body_at(double x) const {
        for (const Piece& p : pieces_)
            if (p.lo <= x && x <= p.hi) return p.body;
        return otherwise_;
    }

    const expr::Expr& body_at(double x, Side side) const {
        for (const Piece& p : pieces_) {
            const bool in = side == Side::Left ? (p.lo < x && x <= p.hi) : (p.lo <= x && x < p.hi);
            if (in) return p.body;
        }
        return otherwise_;
    }

    std::span<const Piece> pieces() const noexcept { return pieces_; }
    const expr::Expr& otherwise() const noexcept { return otherwise_; }
    Smoothness smoothness() const noexcept { return smoothness_; }

    FuncSpec with_smoothness(Smoothness s) const {
        FuncSpec copy = *this;
        copy.smoothness_ = s;
        return copy;
    }

    /// Finite piece endpoints, sorted and unique.
    std::vector<double> breakpoints() const {
        std::vector<double> out;
        for (const Piece& p : pieces_) {
            if (std::isfinite(p.lo)) out.push_back(p.lo);
            if (std::isfinite(p.hi)) out.push_back(p.hi);
        }
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    bool is_breakpoint(double x) const {
        const auto bps = breakpoints();
        return std::find(bps.begin(), bps.end(), x) != bps.end();
    }

    Support support() const {
        constexpr double inf = std::numeric_limits<double>::infinity();
        if (!otherwise_.is_constant(0.0)) return {-inf, inf};
        Support s;
        for (const Piece& p : pieces_) {
            if (p.body.is_constant(0.0)) continue;
            s.lo = std::min(s.lo, p.lo);
            s.hi = std::max(s.hi, p.hi);
        }
        return s;
    }

    std::string str() const {
        std::string out;
        for (const Piece& p : pieces_) {
            if (!out.empty()) out += "; ";
            if (!std::isfinite(p.lo) && !std::isfinite(p.hi) && pieces_.size() == 1 && otherwise_.is_constant(0.0))
                return p.body.str();
            out += "on [" + expr::detail::fmt17(p.lo) + ", " + expr::detail::fmt17(p.hi) + "]: " + p.body.str();
        }
        if (out.empty()) return otherwise_.str();
        return out + "; else: " + otherwise_.str();
    }

private:
    std::vector<Piece> pieces_;
    expr::Expr otherwise_;
    Smoothness smoothness_;
};

inline double eval(const FuncSpec& f, double x) { return f(x); }

/// Piecewise classical derivative of the given order; pieces keep their intervals.
inline FuncSpec differentiate(const FuncSpec& f, int order, int cap = kMaxDerivativeOrder) {
    if (order < 0) throw std::invalid_argument("derivative order must be non-negative");
    if (order > cap)
        throw std::invalid_argument("derivative order " + std::to_string(order) + " exceeds cap " +
                                    std::to_string(cap));
    if (order == 0) return f;
    std::vector<Piece> pieces(f.pieces().begin(), f.pieces().end());
    expr::Expr otherwise = f.otherwise();
    for (int i = 0; i < order; ++i) {
        for (Piece& p : pieces) p.body = p.body.derivative();
        otherwise = otherwise.derivative();
    }
    Smoothness s = f.smoothness();
    if (s.k >= 0) s.k = std::max(0, s.k - order);
    return FuncSpec(std::move(pieces), std::move(otherwise), s);
}

/// y -> f(lambda y + shift). Pieces are mapped back through the inverse map.
inline FuncSpec compose_affine(const FuncSpec& f, double lambda, double shift) {
    if (lambda == 0.0 || !std::isfinite(lambda) || !std::isfinite(shift))
        throw std::invalid_argument("compose_affine: lambda must be finite and non-zero");
    const expr::Expr inner = expr::Expr::constant(lambda) * expr::Expr::var() + expr::Expr::constant(shift);
    std::vector<Piece> pieces;
    for (const Piece& p : f.pieces()) {
        double lo = (p.lo - shift) / lambda, hi = (p.hi - shift) / lambda;
        if (lo > hi) std::swap(lo, hi);
        pieces.push_back({lo, hi, expr::substitute(p.body, inner)});
    }
    return FuncSpec(std::move(pieces), expr::substitute(f.otherwise(), inner), f.smoothness());
}

/// f, f', ..., f^(order), each built from the previous one.
inline std::vector<FuncSpec> derivative_tower(const FuncSpec& f, int order, int cap = kMaxDerivativeOrder) {
    if (order > cap) differentiate(f, order, cap);  // throws
    std::vector<FuncSpec> out{f};
    for (int i = 1; i <= order; ++i) out.push_back(differentiate(out.back(), 1));
    return out;
}

namespace detail {

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    FuncSpec parse_funcdef() {
        skip_ws();
        if (!peek_word("on")) {
            expr::Expr e = parse_expr();
            expect_end();
            return FuncSpec::whole_line(e);
        }
        std::vector<Piece> pieces;
        std::vector<std::pair<int, int>> where;
        expr::Expr otherwise = expr::Expr::constant(0.0);
        for (;;) {
            skip_ws();
            if (peek_word("else")) {
                take_word("else");
                expect(':');
                otherwise = parse_expr();
                skip_ws();
                if (peek(';')) ++pos_;
                break;
            }
            where.emplace_back(line_, col());
            pieces.push_back(parse_piece());
            skip_ws();
            if (!peek(';')) break;
            ++pos_;
            skip_ws();
            if (at_end()) break;
        }
        expect_end();
        std::vector<std::size_t> order(pieces.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](auto i, auto j) { return pieces[i].lo < pieces[j].lo; });
        for (std::size_t i = 1; i < order.size(); ++i) {
            if (pieces[order[i]].lo < pieces[order[i - 1]].hi) {
                auto [l, c] = where[order[i]];
                throw ParseError(ParseError::Kind::Overlap, "piece overlaps a preceding piece", l, c);
            }
        }
        return FuncSpec(std::move(pieces), otherwise);
    }

private:
    Piece parse_piece() {
        take_word("on");
        expect('[');
        const double lo = parse_signed_number();
        expect(',');
        const double hi = parse_signed_number();
        expect(']');
        if (!(lo < hi)) error("interval must satisfy lo < hi");
        expect(':');
        return Piece{lo, hi, parse_expr()};
    }

    expr::Expr parse_expr() {
        expr::Expr lhs = parse_product();
        for (;;) {
            skip_ws();
            if (peek('+')) {
                ++pos_;
                lhs = lhs + parse_product();
            } else if (peek('-')) {
                ++pos_;
                lhs = lhs - parse_product();
            } else {
                return lhs;
            }
        }
    }

    expr::Expr parse_product() {
        expr::Expr lhs = parse_unary();
        for (;;) {
            skip_ws();
            if (peek('*')) {
                ++pos_;
                lhs = lhs * parse_unary();
            } else if (peek('/')) {
                ++pos_;
                const int l = line_, c = col();
                expr::Expr rhs = parse_unary();
                if (rhs.is_constant(0.0)) throw ParseError(ParseError::Kind::Syntax, "division by constant zero", l, c);
                lhs = lhs / rhs;
            } else {
                return lhs;
            }
        }
    }

    // Unary minus binds looser than '^': -x^2 == -(x^2).
    expr::Expr parse_unary() {
        skip_ws();
        if (peek('-')) {
            ++pos_;
            return -parse_unary();
        }
        return parse_power();
    }

    expr::Expr parse_power() {
        expr::Expr base = parse_atom();
        skip_ws();
        if (!peek('^')) return base;
        ++pos_;
        const int l = line_, c = col();
        expr::Expr e = parse_exponent();
        if (!e.is_constant()) throw ParseError(ParseError::Kind::Syntax, "exponent must be a constant", l, c);
        return checked_pow(base, e.value(), l, c);
    }

    expr::Expr parse_exponent() {
        skip_ws();
        if (peek('-')) {
            ++pos_;
            return -parse_exponent();
        }
        return parse_atom();
    }

    expr::Expr parse_atom() {
        skip_ws();
        if (at_end()) error("unexpected end of input");
        const char ch = src_[pos_];
        if (ch == '(') {
            ++pos_;
            expr::Expr e = parse_expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') return expr::Expr::constant(parse_number());
        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            const int l = line_, c = col();
            const std::string id = ident();
            if (id == "x") return expr::Expr::var();
            if (id == "pi") return expr::Expr::constant(std::numbers::pi);
            skip_ws();
            if (!peek('(')) throw ParseError(ParseError::Kind::UnknownIdentifier, "unknown identifier '" + id + "'", l, c);
            return parse_call(id, l, c);
        }
        error(std::string("unexpected character '") + ch + "'");
    }

    expr::Expr parse_call(const std::string& name, int l, int c) {
        using expr::Op;
        static constexpr std::pair<std::string_view, Op> unary[] = {
            {"sqrt", Op::Sqrt}, {"ln", Op::Ln}, {"abs", Op::Abs}, {"sgn", Op::Sgn},
            {"exp", Op::Exp},   {"sin", Op::Sin}, {"cos", Op::Cos}};
        std::optional<Op> op;
        for (auto [n, o] : unary)
            if (n == name) op = o;
        if (!op && name != "pow")
            throw ParseError(ParseError::Kind::UnknownIdentifier, "unknown function '" + name + "'", l, c);
        expect('(');
        std::vector<expr::Expr> args{parse_expr()};
        skip_ws();
        while (peek(',')) {
            ++pos_;
            args.push_back(parse_expr());
            skip_ws();
        }
        expect(')');
        if (op) {
            if (args.size() != 1) throw ParseError(ParseError::Kind::Syntax, name + " takes one argument", l, c);
            try {
                return expr::call(*op, args[0]);
            } catch (const DomainError& e) {
                throw ParseError(ParseError::Kind::Syntax, e.what(), l, c);
            }
        }
        if (args.size() != 2) throw ParseError(ParseError::Kind::Syntax, "pow takes two arguments", l, c);
        if (!args[1].is_constant()) throw ParseError(ParseError::Kind::Syntax, "pow exponent must be a constant", l, c);
        return checked_pow(args[0], args[1].value(), l, c);
    }

    expr::Expr checked_pow(const expr::Expr& base, double e, int l, int c) {
        try {
            return expr::pow(base, e);
        } catch (const DomainError& err) {
            throw ParseError(ParseError::Kind::Syntax, err.what(), l, c);
        }
    }

    double parse_signed_number() {
        skip_ws();
        double sign = 1.0;
        if (peek('-') || peek('+')) {
            sign = src_[pos_] == '-' ? -1.0 : 1.0;
            ++pos_;
            skip_ws();
        }
        if (at_end() || !(std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
            error("expected a number");
        return sign * parse_number();
    }

    double parse_number() {
        const std::size_t start = pos_;
        while (!at_end() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) ++pos_;
        if (!at_end() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
            if (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) {
                pos_ = p;
                while (!at_end() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            }
        }
        const std::string text(src_.substr(start, pos_ - start));
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(text, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != text.size()) {
            pos_ = start;
            error("malformed number '" + text + "'");
        }
        return v;
    }

    std::string ident() {
        const std::size_t start = pos_;
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
        return std::string(src_.substr(start, pos_ - start));
    }

    bool peek_word(std::string_view w) const {
        if (src_.substr(pos_, w.size()) != w) return false;
        const std::size_t after = pos_ + w.size();
        return after >= src_.size() || !(std::isalnum(static_cast<unsigned char>(src_[after])) || src_[after] == '_');
    }

    void take_word(std::string_view w) {
        skip_ws();
        if (!peek_word(w)) error("expected '" + std::string(w) + "'");
        pos_ += w.size();
    }

    void expect(char ch) {
        skip_ws();
        if (!peek(ch)) {
            if (at_end()) error(std::string("expected '") + ch + "' before end of input");
            error(std::string("expected '") + ch + "'");
        }
        ++pos_;
    }

    void expect_end() {
        skip_ws();
        if (!at_end()) error("unexpected trailing input");
    }

    bool peek(char ch) const { return !at_end() && src_[pos_] == ch; }
    bool at_end() const { return pos_ >= src_.size(); }
    int col() const { return static_cast<int>(pos_ - line_start_) + 1; }

    // Whitespace, newlines and '#' comments.
    void skip_ws() {
        while (!at_end()) {
            const char ch = src_[pos_];
            if (ch == '#') {
                while (!at_end() && src_[pos_] != '\n') ++pos_;
            } else if (ch == '\n') {
                ++pos_;
                ++line_;
                line_start_ = pos_;
            } else if (std::isspace(static_cast<unsigned char>(ch))) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    [[noreturn]] void error(const std::string& msg) const { throw ParseError(ParseError::Kind::Syntax, msg, line_, col()); }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_start_ = 0;
    int line_ = 1;
};

}  // namespace detail

/// Parse the piecewise DSL, e.g. "on [-1,1]: sqrt(1 - x^2); else: 0".
inline FuncSpec parse_function(std::string_view text) { return detail::Parser(text).parse_funcdef(); }

}  // namespace sivt
