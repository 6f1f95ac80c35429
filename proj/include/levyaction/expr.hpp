#pragma once

#include <functional>
#include <memory>
#include <string>

namespace levyaction {

// Compiled scalar expression over one variable. Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := unary ('^' factor)?            -- right associative
//   unary  := '-' unary | primary
//   primary:= NUMBER | 'x' | 'pi' | name '(' expr ')' | '(' expr ')'
// with name in {exp, sin, cos, tanh}. Parse failures throw ParseError with a
// 0-based character offset. Constant subtrees are folded at parse time.
class Expr {
public:
    double operator()(double x) const;
    bool is_constant() const;
    double constant_value() const;  // valid when is_constant()
    const std::string& source() const { return source_; }

    static Expr parse(const std::string& text);

    struct Node;

private:
    std::shared_ptr<const Node> root_;
    std::string source_;
};

}  // namespace levyaction
