#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "laplace/errors.hpp"
#include "laplace/jet.hpp"

namespace laplace {

// A parsed univariate expression in the variable x.
//
// Grammar (whitespace insignificant):
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := '-' factor | power
//   power  := atom ('^' factor)?
//   atom   := number | 'x' | 'pi' | 'e'
//           | func '(' expr ')' | '(' expr ')'
//   func   := 'exp' | 'log' | 'sqrt' | 'sin' | 'cos'
//
// '^' binds tighter than unary minus and associates to the right.
// 'pi' and 'e' are folded to literals during parsing.
class Expr {
public:
    static Expr parse(std::string_view text);

    // Pointwise evaluation. Out-of-domain elementary calls (log of a
    // non-positive value, sqrt of a negative value, fractional powers of
    // negative bases) throw DomainError. Overflow follows IEEE semantics
    // and yields an infinity rather than an error.
    double eval(double x) const;

    // Taylor coefficients of the expression at `center` up to `order`.
    // Throws DomainError when some needed derivative does not exist
    // (e.g. derivatives of sqrt at zero).
    Jet jet_eval(double center, int order) const;

    // k-th derivative at x0, via jet_eval.
    double derivative(double x0, int k) const;

    // Text form that parses back to an evaluation-equivalent expression.
    std::string render() const;

    // S-expression form exposing the tree structure, e.g. "(- (log x) x)".
    std::string dump() const;

    struct Node;

private:
    using NodePtr = std::shared_ptr<const Node>;
    explicit Expr(NodePtr root) : root_(std::move(root)) {}
    NodePtr root_;
};

}  // namespace laplace
