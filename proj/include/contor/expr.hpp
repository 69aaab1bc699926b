#pragma once

#include "contor/interval.hpp"

#include <cctype>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace contor {

// Expression trees for the maps under study: rational piecewise-polynomial
// components over variables x_0 .. x_{d-1}.
//
// Textual form is a prefix s-expression, e.g.
//   (mul 2 (var 0))            2x
//   (neg (pow (var 0) 3))      -x^3
//   (ifneg 0 (mul 2 (var 0)) (mul 1/2 (var 0)))
// A d-component map is (vec e0 e1 ... e{d-1}); a bare expression is the
// one-dimensional map.
struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    enum class Op { Const, Var, Add, Sub, Mul, Neg, Pow, IfNeg };
    Op op;
    Rat value;       // Const
    int var = 0;     // Var index, or the tested coordinate for IfNeg
    int exponent = 0;
    ExprPtr a, b;    // operands; IfNeg: a = branch for x_var < 0, b = branch otherwise

    static ExprPtr constant(Rat v) {
        auto n = std::make_shared<ExprNode>();
        n->op = Op::Const;
        n->value = std::move(v);
        return n;
    }
    static ExprPtr variable(int i) {
        auto n = std::make_shared<ExprNode>();
        n->op = Op::Var;
        n->var = i;
        return n;
    }
    static ExprPtr binary(Op o, ExprPtr x, ExprPtr y) {
        auto n = std::make_shared<ExprNode>();
        n->op = o;
        n->a = std::move(x);
        n->b = std::move(y);
        return n;
    }
    static ExprPtr neg(ExprPtr x) {
        auto n = std::make_shared<ExprNode>();
        n->op = Op::Neg;
        n->a = std::move(x);
        return n;
    }
    static ExprPtr pow(ExprPtr x, int k) {
        auto n = std::make_shared<ExprNode>();
        n->op = Op::Pow;
        n->a = std::move(x);
        n->exponent = k;
        return n;
    }
    static ExprPtr ifneg(int coord, ExprPtr when_neg, ExprPtr otherwise) {
        auto n = std::make_shared<ExprNode>();
        n->op = Op::IfNeg;
        n->var = coord;
        n->a = std::move(when_neg);
        n->b = std::move(otherwise);
        return n;
    }
};

struct MapExpr {
    int arity = 1;                 // dimension d of both domain and range
    std::vector<ExprPtr> comps;    // exactly d components

    MapExpr() = default;
    MapExpr(int d, std::vector<ExprPtr> cs) : arity(d), comps(std::move(cs)) {
        if (arity < 1 || static_cast<int>(comps.size()) != arity)
            throw std::invalid_argument("map must have one component per dimension");
    }
};

namespace detail {

inline void check_var(int v, int dim) {
    if (v < 0 || v >= dim) throw std::invalid_argument("variable index out of range");
}

inline Interval eval_node(const ExprPtr& e, const Box& x) {
    using Op = ExprNode::Op;
    switch (e->op) {
        case Op::Const: return Interval::point(e->value);
        case Op::Var:
            check_var(e->var, x.dim());
            return x[e->var];
        case Op::Add: return eval_node(e->a, x) + eval_node(e->b, x);
        case Op::Sub: return eval_node(e->a, x) - eval_node(e->b, x);
        case Op::Mul: return eval_node(e->a, x) * eval_node(e->b, x);
        case Op::Neg: return -eval_node(e->a, x);
        case Op::Pow: return eval_node(e->a, x).pow(e->exponent);
        case Op::IfNeg: {
            check_var(e->var, x.dim());
            const Interval& c = x[e->var];
            // Strictly negative / strictly positive pick one branch; a
            // condition interval containing 0 hulls both branch images,
            // each evaluated over its own sign region.
            if (c.hi < 0) return eval_node(e->a, x);
            if (c.lo > 0) return eval_node(e->b, x);
            Box neg = x, pos = x;
            neg[e->var] = Interval(c.lo, Rat(0));
            pos[e->var] = Interval(Rat(0), c.hi);
            return hull(eval_node(e->a, neg), eval_node(e->b, pos));
        }
    }
    throw std::logic_error("unreachable");
}

inline Rat eval_node_point(const ExprPtr& e, const std::vector<Rat>& x) {
    using Op = ExprNode::Op;
    switch (e->op) {
        case Op::Const: return e->value;
        case Op::Var:
            check_var(e->var, static_cast<int>(x.size()));
            return x[static_cast<std::size_t>(e->var)];
        case Op::Add: return eval_node_point(e->a, x) + eval_node_point(e->b, x);
        case Op::Sub: return eval_node_point(e->a, x) - eval_node_point(e->b, x);
        case Op::Mul: return eval_node_point(e->a, x) * eval_node_point(e->b, x);
        case Op::Neg: return -eval_node_point(e->a, x);
        case Op::Pow: {
            Rat v = eval_node_point(e->a, x), r(1);
            for (int i = 0; i < e->exponent; ++i) r *= v;
            return r;
        }
        case Op::IfNeg: {
            check_var(e->var, static_cast<int>(x.size()));
            return x[static_cast<std::size_t>(e->var)] < 0 ? eval_node_point(e->a, x)
                                                           : eval_node_point(e->b, x);
        }
    }
    throw std::logic_error("unreachable");
}

}  // namespace detail

// Guaranteed enclosure: the returned box contains expr(x) for every x in the
// input box.
inline Box evaluate_interval(const MapExpr& expr, const Box& input) {
    if (expr.arity != input.dim())
        throw std::invalid_argument("expression arity does not match box dimension");
    std::vector<Interval> out;
    out.reserve(expr.comps.size());
    for (const auto& c : expr.comps) out.push_back(detail::eval_node(c, input));
    return Box(std::move(out));
}

inline std::vector<Rat> evaluate_point(const MapExpr& expr, const std::vector<Rat>& x) {
    if (expr.arity != static_cast<int>(x.size()))
        throw std::invalid_argument("expression arity does not match point dimension");
    std::vector<Rat> out;
    out.reserve(expr.comps.size());
    for (const auto& c : expr.comps) out.push_back(detail::eval_node_point(c, x));
    return out;
}

// ---------------------------------------------------------------------------
// s-expression parser

namespace detail {

struct SexpParser {
    const std::string& src;
    std::size_t pos = 0;
    int line = 1, col = 1;

    explicit SexpParser(const std::string& s) : src(s) {}

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line, col); }

    void advance() {
        if (src[pos] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++pos;
    }
    void skip_ws() {
        while (pos < src.size()) {
            if (std::isspace(static_cast<unsigned char>(src[pos]))) {
                advance();
            } else if (src[pos] == ';') {  // comment to end of line
                while (pos < src.size() && src[pos] != '\n') advance();
            } else {
                break;
            }
        }
    }
    bool at_end() {
        skip_ws();
        return pos >= src.size();
    }
    char peek() {
        skip_ws();
        if (pos >= src.size()) fail("unexpected end of expression");
        return src[pos];
    }
    std::string token() {
        skip_ws();
        if (pos >= src.size()) fail("unexpected end of expression");
        std::size_t start = pos;
        while (pos < src.size() && !std::isspace(static_cast<unsigned char>(src[pos])) &&
               src[pos] != '(' && src[pos] != ')')
            advance();
        if (pos == start) fail(std::string("unexpected character '") + src[pos] + "'");
        return src.substr(start, pos - start);
    }
    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "'");
        advance();
    }

    bool token_is_number(const std::string& t) const {
        char c = t[0];
        return std::isdigit(static_cast<unsigned char>(c)) ||
               ((c == '-' || c == '+') && t.size() > 1);
    }

    int parse_int_token() {
        std::string t = token();
        try {
            std::size_t used = 0;
            int v = std::stoi(t, &used);
            if (used != t.size()) fail("expected integer, got '" + t + "'");
            return v;
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception&) {
            fail("expected integer, got '" + t + "'");
        }
    }

    ExprPtr parse_expr() {
        if (peek() != '(') {
            std::string t = token();
            if (!token_is_number(t)) fail("expected number or '(', got '" + t + "'");
            try {
                return ExprNode::constant(parse_rational(t));
            } catch (const ParseError& e) {
                fail(e.what());
            }
        }
        expect('(');
        std::string head = token();
        ExprPtr result;
        if (head == "var") {
            result = ExprNode::variable(parse_int_token());
        } else if (head == "add" || head == "sub" || head == "mul") {
            ExprPtr a = parse_expr();
            ExprPtr b = parse_expr();
            auto op = head == "add"   ? ExprNode::Op::Add
                      : head == "sub" ? ExprNode::Op::Sub
                                      : ExprNode::Op::Mul;
            result = ExprNode::binary(op, std::move(a), std::move(b));
        } else if (head == "neg") {
            result = ExprNode::neg(parse_expr());
        } else if (head == "pow") {
            ExprPtr a = parse_expr();
            int k = parse_int_token();
            if (k < 0) fail("pow requires a nonnegative integer exponent");
            result = ExprNode::pow(std::move(a), k);
        } else if (head == "ifneg") {
            int coord = parse_int_token();
            ExprPtr a = parse_expr();
            ExprPtr b = parse_expr();
            result = ExprNode::ifneg(coord, std::move(a), std::move(b));
        } else if (token_is_number(head)) {
            fail("operator expected after '(', got number '" + head + "'");
        } else {
            fail("unknown operator '" + head + "'");
        }
        expect(')');
        return result;
    }
};

inline void check_vars_in_range(const ExprPtr& e, int dim) {
    using Op = ExprNode::Op;
    if (e->op == Op::Var || e->op == Op::IfNeg) check_var(e->var, dim);
    if (e->a) check_vars_in_range(e->a, dim);
    if (e->b) check_vars_in_range(e->b, dim);
}

}  // namespace detail

// Parses a map of the given arity. A (vec ...) form must list exactly `dim`
// components; a bare expression is accepted for dim == 1.
inline MapExpr parse_map_expr(const std::string& text, int dim = 1) {
    detail::SexpParser p(text);
    std::vector<ExprPtr> comps;
    if (p.peek() == '(') {
        std::size_t save_pos = p.pos;
        int save_line = p.line, save_col = p.col;
        p.advance();
        std::string head = p.token();
        if (head == "vec") {
            while (p.peek() != ')') comps.push_back(p.parse_expr());
            p.expect(')');
        } else {
            p.pos = save_pos;
            p.line = save_line;
            p.col = save_col;
            comps.push_back(p.parse_expr());
        }
    } else {
        comps.push_back(p.parse_expr());
    }
    if (!p.at_end()) p.fail("trailing input after expression");
    if (static_cast<int>(comps.size()) != dim)
        throw ParseError("expected " + std::to_string(dim) + " component(s), got " +
                         std::to_string(comps.size()));
    MapExpr m(dim, std::move(comps));
    for (const auto& c : m.comps) detail::check_vars_in_range(c, dim);
    return m;
}

inline std::string format_expr(const ExprPtr& e) {
    using Op = ExprNode::Op;
    std::ostringstream os;
    switch (e->op) {
        case Op::Const: os << format_rational(e->value); break;
        case Op::Var: os << "(var " << e->var << ")"; break;
        case Op::Add: os << "(add " << format_expr(e->a) << " " << format_expr(e->b) << ")"; break;
        case Op::Sub: os << "(sub " << format_expr(e->a) << " " << format_expr(e->b) << ")"; break;
        case Op::Mul: os << "(mul " << format_expr(e->a) << " " << format_expr(e->b) << ")"; break;
        case Op::Neg: os << "(neg " << format_expr(e->a) << ")"; break;
        case Op::Pow: os << "(pow " << format_expr(e->a) << " " << e->exponent << ")"; break;
        case Op::IfNeg:
            os << "(ifneg " << e->var << " " << format_expr(e->a) << " " << format_expr(e->b) << ")";
            break;
    }
    return os.str();
}

inline std::string format_map_expr(const MapExpr& m) {
    if (m.arity == 1) return format_expr(m.comps[0]);
    std::ostringstream os;
    os << "(vec";
    for (const auto& c : m.comps) os << " " << format_expr(c);
    os << ")";
    return os.str();
}

}  // namespace contor
