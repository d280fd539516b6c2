#include "conekit/expr.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "conekit/charfn.hpp"

namespace conekit::expr {

enum class Op { Num, Delta, Dot, Exp, Add, Sub, Mul, Div, Pow, Neg };

class Node {
public:
    Op op;
    double value = 0;   // Num
    Vec coeffs;         // Dot
    NodePtr a, b;
};

namespace {

struct Parser {
    const std::string& s;
    size_t pos = 0;

    explicit Parser(const std::string& src) : s(src) {}

    void skip() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eat(char c) {
        skip();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!eat(c))
            throw std::invalid_argument("expr: expected '" + std::string(1, c) + "' at offset " +
                                        std::to_string(pos) + " in \"" + s + "\"");
    }
    bool eat_word(const char* w) {
        skip();
        size_t len = std::string(w).size();
        if (s.compare(pos, len, w) == 0) {
            pos += len;
            return true;
        }
        return false;
    }

    NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
        auto n = std::make_shared<Node>();
        n->op = op;
        n->a = std::move(a);
        n->b = std::move(b);
        return n;
    }

    double number() {
        skip();
        size_t end = pos;
        while (end < s.size() &&
               (std::isdigit(static_cast<unsigned char>(s[end])) || s[end] == '.' ||
                s[end] == 'e' || s[end] == 'E' ||
                ((s[end] == '+' || s[end] == '-') && end > pos &&
                 (s[end - 1] == 'e' || s[end - 1] == 'E'))))
            ++end;
        if (end == pos) throw std::invalid_argument("expr: number expected at offset " +
                                                    std::to_string(pos) + " in \"" + s + "\"");
        const double v = std::stod(s.substr(pos, end - pos));
        pos = end;
        return v;
    }

    Vec vector_literal() {
        expect('[');
        std::vector<double> vals;
        if (!eat(']')) {
            for (;;) {
                skip();
                bool neg = eat('-');
                double v = number();
                vals.push_back(neg ? -v : v);
                if (eat(']')) break;
                expect(',');
            }
        }
        Vec v(static_cast<Eigen::Index>(vals.size()));
        for (size_t i = 0; i < vals.size(); ++i) v[static_cast<Eigen::Index>(i)] = vals[i];
        return v;
    }

    NodePtr primary() {
        skip();
        if (eat_word("delta")) {
            expect('(');
            skip();
            if (!eat_word("x")) throw std::invalid_argument("expr: delta takes the argument x");
            expect(')');
            return make(Op::Delta);
        }
        if (eat_word("dot")) {
            expect('(');
            auto n = std::make_shared<Node>();
            n->op = Op::Dot;
            n->coeffs = vector_literal();
            expect(',');
            skip();
            if (!eat_word("x"))
                throw std::invalid_argument("expr: dot's second argument must be x");
            expect(')');
            return n;
        }
        if (eat_word("exp")) {
            expect('(');
            NodePtr inner = expr();
            expect(')');
            return make(Op::Exp, inner);
        }
        if (eat('(')) {
            NodePtr inner = expr();
            expect(')');
            return inner;
        }
        auto n = std::make_shared<Node>();
        n->op = Op::Num;
        n->value = number();
        return n;
    }

    NodePtr unary() {
        if (eat('-')) return make(Op::Neg, unary());
        return primary();
    }

    NodePtr factor() {
        NodePtr base = unary();
        if (eat('^')) return make(Op::Pow, base, factor());
        return base;
    }

    NodePtr term() {
        NodePtr lhs = factor();
        for (;;) {
            if (eat('*')) lhs = make(Op::Mul, lhs, factor());
            else if (eat('/')) lhs = make(Op::Div, lhs, factor());
            else return lhs;
        }
    }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            if (eat('+')) lhs = make(Op::Add, lhs, term());
            else if (eat('-')) lhs = make(Op::Sub, lhs, term());
            else return lhs;
        }
    }
};

}  // namespace

NodePtr parse(const std::string& source) {
    Parser p(source);
    NodePtr root = p.expr();
    p.skip();
    if (p.pos != source.size())
        throw std::invalid_argument("expr: trailing input at offset " + std::to_string(p.pos) +
                                    " in \"" + source + "\"");
    return root;
}

double evaluate(const NodePtr& n, const ConeModel& cone, const Vec& x) {
    switch (n->op) {
        case Op::Num:
            return n->value;
        case Op::Delta:
            return delta(cone, x);
        case Op::Dot:
            if (n->coeffs.size() != x.size())
                throw std::invalid_argument("expr: dot coefficient length does not match dim");
            return n->coeffs.dot(x);
        case Op::Exp:
            return std::exp(evaluate(n->a, cone, x));
        case Op::Add:
            return evaluate(n->a, cone, x) + evaluate(n->b, cone, x);
        case Op::Sub:
            return evaluate(n->a, cone, x) - evaluate(n->b, cone, x);
        case Op::Mul:
            return evaluate(n->a, cone, x) * evaluate(n->b, cone, x);
        case Op::Div:
            return evaluate(n->a, cone, x) / evaluate(n->b, cone, x);
        case Op::Pow:
            return std::pow(evaluate(n->a, cone, x), evaluate(n->b, cone, x));
        case Op::Neg:
            return -evaluate(n->a, cone, x);
    }
    throw std::logic_error("expr: bad node");
}

}  // namespace conekit::expr
