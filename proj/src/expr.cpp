#include "levyaction/expr.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <vector>

#include "levyaction/errors.hpp"

namespace levyaction {

namespace {

enum class Op { constant, variable, add, sub, mul, div, pow, neg, exp, sin, cos, tanh };

}  // namespace

struct Expr::Node {
    Op op;
    double value = 0.0;  // constants
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;

    double eval(double x) const {
        switch (op) {
            case Op::constant: return value;
            case Op::variable: return x;
            case Op::add: return lhs->eval(x) + rhs->eval(x);
            case Op::sub: return lhs->eval(x) - rhs->eval(x);
            case Op::mul: return lhs->eval(x) * rhs->eval(x);
            case Op::div: return lhs->eval(x) / rhs->eval(x);
            case Op::pow: return std::pow(lhs->eval(x), rhs->eval(x));
            case Op::neg: return -lhs->eval(x);
            case Op::exp: return std::exp(lhs->eval(x));
            case Op::sin: return std::sin(lhs->eval(x));
            case Op::cos: return std::cos(lhs->eval(x));
            case Op::tanh: return std::tanh(lhs->eval(x));
        }
        return 0.0;
    }
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

NodePtr make_const(double v) {
    auto n = std::make_shared<Expr::Node>();
    n->op = Op::constant;
    n->value = v;
    return n;
}

NodePtr make_node(Op op, NodePtr lhs, NodePtr rhs = nullptr) {
    // constant folding
    const bool l_const = lhs && lhs->op == Op::constant;
    const bool r_const = !rhs || rhs->op == Op::constant;
    if (l_const && r_const) {
        auto probe = std::make_shared<Expr::Node>();
        probe->op = op;
        probe->lhs = lhs;
        probe->rhs = rhs;
        return make_const(probe->eval(0.0));
    }
    auto n = std::make_shared<Expr::Node>();
    n->op = op;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

struct Token {
    enum class Type { number, ident, op, lparen, rparen, end };
    Type type;
    double number = 0.0;
    std::string ident;
    char op = 0;
    std::size_t pos = 0;
};

std::vector<Token> tokenize(const std::string& s) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        const char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t used = 0;
            double v;
            try {
                v = std::stod(s.substr(i), &used);
            } catch (const std::exception&) {
                throw ParseError("parse error at offset " + std::to_string(i) +
                                     ": malformed number",
                                 i);
            }
            out.push_back({Token::Type::number, v, "", 0, i});
            i += used;
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < s.size() && std::isalpha(static_cast<unsigned char>(s[j]))) ++j;
            out.push_back({Token::Type::ident, 0.0, s.substr(i, j - i), 0, i});
            i = j;
            continue;
        }
        if (c == '(') {
            out.push_back({Token::Type::lparen, 0.0, "", 0, i});
            ++i;
            continue;
        }
        if (c == ')') {
            out.push_back({Token::Type::rparen, 0.0, "", 0, i});
            ++i;
            continue;
        }
        if (c == '+' || c == '-' || c == '*' || c == '/' || c == '^') {
            out.push_back({Token::Type::op, 0.0, "", c, i});
            ++i;
            continue;
        }
        throw ParseError("parse error at offset " + std::to_string(i) +
                             ": unexpected character '" + std::string(1, c) + "'",
                         i);
    }
    out.push_back({Token::Type::end, 0.0, "", 0, s.size()});
    return out;
}

class Parser {
public:
    explicit Parser(const std::string& text) : tokens_(tokenize(text)) {}

    NodePtr run() {
        NodePtr e = expr();
        expect_end();
        return e;
    }

private:
    std::vector<Token> tokens_;
    std::size_t idx_ = 0;

    const Token& peek() const { return tokens_[idx_]; }
    const Token& take() { return tokens_[idx_++]; }

    [[noreturn]] void fail(const Token& t, const std::string& what) {
        throw ParseError("parse error at offset " + std::to_string(t.pos) + ": " + what,
                         t.pos);
    }

    void expect_end() {
        if (peek().type != Token::Type::end) fail(peek(), "trailing input");
    }

    NodePtr expr() {
        NodePtr lhs = term();
        while (peek().type == Token::Type::op && (peek().op == '+' || peek().op == '-')) {
            const char op = take().op;
            NodePtr rhs = term();
            lhs = make_node(op == '+' ? Op::add : Op::sub, lhs, rhs);
        }
        return lhs;
    }

    NodePtr term() {
        NodePtr lhs = factor();
        while (peek().type == Token::Type::op && (peek().op == '*' || peek().op == '/')) {
            const char op = take().op;
            NodePtr rhs = factor();
            lhs = make_node(op == '*' ? Op::mul : Op::div, lhs, rhs);
        }
        return lhs;
    }

    NodePtr factor() {
        NodePtr base = unary();
        if (peek().type == Token::Type::op && peek().op == '^') {
            take();
            NodePtr exponent = factor();  // right associative
            return make_node(Op::pow, base, exponent);
        }
        return base;
    }

    NodePtr unary() {
        if (peek().type == Token::Type::op && peek().op == '-') {
            take();
            return make_node(Op::neg, unary());
        }
        return primary();
    }

    NodePtr primary() {
        const Token t = take();
        switch (t.type) {
            case Token::Type::number:
                return make_const(t.number);
            case Token::Type::ident: {
                if (t.ident == "x") {
                    auto n = std::make_shared<Expr::Node>();
                    n->op = Op::variable;
                    return n;
                }
                if (t.ident == "pi") return make_const(std::numbers::pi);
                Op fn;
                if (t.ident == "exp") fn = Op::exp;
                else if (t.ident == "sin") fn = Op::sin;
                else if (t.ident == "cos") fn = Op::cos;
                else if (t.ident == "tanh") fn = Op::tanh;
                else fail(t, "unknown identifier '" + t.ident + "'");
                if (peek().type != Token::Type::lparen)
                    fail(peek(), "expected '(' after function name");
                take();
                NodePtr arg = expr();
                if (peek().type != Token::Type::rparen) fail(peek(), "expected ')'");
                take();
                return make_node(fn, arg);
            }
            case Token::Type::lparen: {
                NodePtr inner = expr();
                if (peek().type != Token::Type::rparen) fail(peek(), "expected ')'");
                take();
                return inner;
            }
            default:
                fail(t, "expected a value");
        }
    }
};

}  // namespace

double Expr::operator()(double x) const { return root_->eval(x); }

bool Expr::is_constant() const { return root_ && root_->op == Op::constant; }

double Expr::constant_value() const { return root_->value; }

Expr Expr::parse(const std::string& text) {
    Parser parser(text);
    Expr e;
    e.root_ = parser.run();
    e.source_ = text;
    return e;
}

}  // namespace levyaction
