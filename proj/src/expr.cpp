#include "laplace/expr.hpp"

#include <cassert>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <utility>
#include <vector>

namespace laplace {

double Jet::derivative(int j) const {
    if (j < 0 || j > order()) {
        throw Error("jet derivative order " + std::to_string(j) +
                    " outside stored range [0, " + std::to_string(order()) + "]");
    }
    double fact = 1.0;
    for (int i = 2; i <= j; ++i) fact *= i;
    return coeffs[static_cast<std::size_t>(j)] * fact;
}

struct Expr::Node {
    enum class Kind {
        Literal, Var,
        Add, Sub, Mul, Div, Pow, Neg,
        Exp, Log, Sqrt, Sin, Cos,
    };

    Kind kind;
    double value = 0.0;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
};

namespace {

using Node = Expr::Node;
using Kind = Node::Kind;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make_literal(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Literal;
    n->value = v;
    return n;
}

NodePtr make_unary(Kind k, NodePtr operand) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->lhs = std::move(operand);
    return n;
}

NodePtr make_binary(Kind k, NodePtr l, NodePtr r) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    return n;
}

// ---------------------------------------------------------------------------
// parsing

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    NodePtr run() {
        NodePtr n = expr();
        skip_ws();
        if (pos_ != s_.size()) throw SyntaxError(pos_, "end of expression");
        return n;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < s_.size() &&
               std::isspace(static_cast<unsigned char>(s_[pos_]))) {
            ++pos_;
        }
    }

    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    bool accept(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c, const char* what) {
        if (!accept(c)) throw SyntaxError(pos_, what);
    }

    NodePtr expr() {
        NodePtr n = term();
        for (;;) {
            if (accept('+')) {
                n = make_binary(Kind::Add, std::move(n), term());
            } else if (accept('-')) {
                n = make_binary(Kind::Sub, std::move(n), term());
            } else {
                return n;
            }
        }
    }

    NodePtr term() {
        NodePtr n = factor();
        for (;;) {
            if (accept('*')) {
                n = make_binary(Kind::Mul, std::move(n), factor());
            } else if (accept('/')) {
                n = make_binary(Kind::Div, std::move(n), factor());
            } else {
                return n;
            }
        }
    }

    NodePtr factor() {
        if (accept('-')) return make_unary(Kind::Neg, factor());
        return power();
    }

    NodePtr power() {
        NodePtr base = atom();
        if (accept('^')) {
            return make_binary(Kind::Pow, std::move(base), factor());
        }
        return base;
    }

    NodePtr atom() {
        char c = peek();
        if (c == '(') {
            ++pos_;
            NodePtr n = expr();
            expect(')', "')'");
            return n;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return number();
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            return identifier();
        }
        throw SyntaxError(pos_, "a number, 'x', a constant, a function call, or '('");
    }

    NodePtr number() {
        const char* first = s_.data() + pos_;
        const char* last = s_.data() + s_.size();
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr == first) {
            throw SyntaxError(pos_, "a representable number");
        }
        pos_ = static_cast<std::size_t>(ptr - s_.data());
        return make_literal(v);
    }

    NodePtr identifier() {
        std::size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
            ++pos_;
        }
        std::string name(s_.substr(start, pos_ - start));
        if (name == "x") {
            auto n = std::make_shared<Node>();
            n->kind = Kind::Var;
            return n;
        }
        if (name == "pi") return make_literal(M_PI);
        if (name == "e") return make_literal(M_E);

        Kind k;
        if (name == "exp") k = Kind::Exp;
        else if (name == "log") k = Kind::Log;
        else if (name == "sqrt") k = Kind::Sqrt;
        else if (name == "sin") k = Kind::Sin;
        else if (name == "cos") k = Kind::Cos;
        else throw UnknownIdentifier(start, name);

        expect('(', "'(' after function name");
        NodePtr arg = expr();
        expect(')', "')'");
        return make_unary(k, std::move(arg));
    }
};

// ---------------------------------------------------------------------------
// pointwise evaluation

bool integral_exponent(double e) {
    return std::rint(e) == e && std::abs(e) <= 9.007199254740992e15;
}

double scalar_pow(double base, double expo) {
    if (base < 0.0 && !integral_exponent(expo)) throw DomainError("pow", base);
    return std::pow(base, expo);
}

double eval_node(const Node& n, double x) {
    switch (n.kind) {
        case Kind::Literal: return n.value;
        case Kind::Var: return x;
        case Kind::Add: return eval_node(*n.lhs, x) + eval_node(*n.rhs, x);
        case Kind::Sub: return eval_node(*n.lhs, x) - eval_node(*n.rhs, x);
        case Kind::Mul: return eval_node(*n.lhs, x) * eval_node(*n.rhs, x);
        case Kind::Div: return eval_node(*n.lhs, x) / eval_node(*n.rhs, x);
        case Kind::Neg: return -eval_node(*n.lhs, x);
        case Kind::Pow: return scalar_pow(eval_node(*n.lhs, x), eval_node(*n.rhs, x));
        case Kind::Exp: return std::exp(eval_node(*n.lhs, x));
        case Kind::Log: {
            double u = eval_node(*n.lhs, x);
            if (u <= 0.0) throw DomainError("log", u);
            return std::log(u);
        }
        case Kind::Sqrt: {
            double u = eval_node(*n.lhs, x);
            if (u < 0.0) throw DomainError("sqrt", u);
            return std::sqrt(u);
        }
        case Kind::Sin: return std::sin(eval_node(*n.lhs, x));
        case Kind::Cos: return std::cos(eval_node(*n.lhs, x));
    }
    throw Error("corrupt expression node");
}

// ---------------------------------------------------------------------------
// Taylor jets
//
// A jet is the vector of Taylor coefficients about a fixed center; all
// binary operations below are truncated Cauchy products and their inverses.

using Coeffs = std::vector<double>;

Coeffs jc_const(double v, std::size_t len) {
    Coeffs c(len, 0.0);
    c[0] = v;
    return c;
}

Coeffs jc_add(const Coeffs& a, const Coeffs& b) {
    Coeffs c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
    return c;
}

Coeffs jc_sub(const Coeffs& a, const Coeffs& b) {
    Coeffs c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
    return c;
}

Coeffs jc_neg(const Coeffs& a) {
    Coeffs c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = -a[i];
    return c;
}

Coeffs jc_mul(const Coeffs& a, const Coeffs& b) {
    Coeffs c(a.size(), 0.0);
    for (std::size_t k = 0; k < a.size(); ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i <= k; ++i) s += a[i] * b[k - i];
        c[k] = s;
    }
    return c;
}

Coeffs jc_div(const Coeffs& a, const Coeffs& b) {
    Coeffs c(a.size(), 0.0);
    if (b[0] == 0.0) {
        if (a.size() == 1) {
            c[0] = a[0] / b[0];
            return c;
        }
        throw DomainError("div", 0.0);
    }
    for (std::size_t k = 0; k < a.size(); ++k) {
        double s = a[k];
        for (std::size_t i = 1; i <= k; ++i) s -= b[i] * c[k - i];
        c[k] = s / b[0];
    }
    return c;
}

Coeffs jc_exp(const Coeffs& u) {
    Coeffs w(u.size(), 0.0);
    w[0] = std::exp(u[0]);
    for (std::size_t k = 1; k < u.size(); ++k) {
        double s = 0.0;
        for (std::size_t j = 1; j <= k; ++j) s += static_cast<double>(j) * u[j] * w[k - j];
        w[k] = s / static_cast<double>(k);
    }
    return w;
}

Coeffs jc_log(const Coeffs& u) {
    if (u[0] <= 0.0) throw DomainError("log", u[0]);
    Coeffs w(u.size(), 0.0);
    w[0] = std::log(u[0]);
    for (std::size_t k = 1; k < u.size(); ++k) {
        double s = u[k];
        for (std::size_t j = 1; j < k; ++j) {
            s -= static_cast<double>(j) / static_cast<double>(k) * w[j] * u[k - j];
        }
        w[k] = s / u[0];
    }
    return w;
}

Coeffs jc_sqrt(const Coeffs& u) {
    if (u[0] < 0.0) throw DomainError("sqrt", u[0]);
    Coeffs w(u.size(), 0.0);
    if (u[0] == 0.0) {
        if (u.size() == 1) return w;
        throw DomainError("sqrt", 0.0);
    }
    w[0] = std::sqrt(u[0]);
    for (std::size_t k = 1; k < u.size(); ++k) {
        double s = u[k];
        for (std::size_t j = 1; j < k; ++j) s -= w[j] * w[k - j];
        w[k] = s / (2.0 * w[0]);
    }
    return w;
}

Coeffs jc_sincos(const Coeffs& u, bool want_sin) {
    Coeffs s(u.size(), 0.0), c(u.size(), 0.0);
    s[0] = std::sin(u[0]);
    c[0] = std::cos(u[0]);
    for (std::size_t k = 1; k < u.size(); ++k) {
        double as = 0.0, ac = 0.0;
        for (std::size_t j = 1; j <= k; ++j) {
            as += static_cast<double>(j) * u[j] * c[k - j];
            ac += static_cast<double>(j) * u[j] * s[k - j];
        }
        s[k] = as / static_cast<double>(k);
        c[k] = -ac / static_cast<double>(k);
    }
    return want_sin ? s : c;
}

Coeffs jc_powi(const Coeffs& u, long long k) {
    std::size_t len = u.size();
    if (k == 0) return jc_const(1.0, len);
    bool invert = k < 0;
    unsigned long long m = invert ? static_cast<unsigned long long>(-k)
                                  : static_cast<unsigned long long>(k);
    Coeffs acc = jc_const(1.0, len);
    Coeffs base = u;
    while (m > 0) {
        if (m & 1ull) acc = jc_mul(acc, base);
        m >>= 1;
        if (m > 0) base = jc_mul(base, base);
    }
    if (!invert) return acc;
    if (acc[0] == 0.0 && len > 1) throw DomainError("pow", u[0]);
    return jc_div(jc_const(1.0, len), acc);
}

Coeffs jc_scale(Coeffs a, double v) {
    for (double& c : a) c *= v;
    return a;
}

Coeffs jet_node(const Node& n, double center, std::size_t len) {
    switch (n.kind) {
        case Kind::Literal: return jc_const(n.value, len);
        case Kind::Var: {
            Coeffs c(len, 0.0);
            c[0] = center;
            if (len > 1) c[1] = 1.0;
            return c;
        }
        case Kind::Add: return jc_add(jet_node(*n.lhs, center, len), jet_node(*n.rhs, center, len));
        case Kind::Sub: return jc_sub(jet_node(*n.lhs, center, len), jet_node(*n.rhs, center, len));
        case Kind::Mul: return jc_mul(jet_node(*n.lhs, center, len), jet_node(*n.rhs, center, len));
        case Kind::Div: return jc_div(jet_node(*n.lhs, center, len), jet_node(*n.rhs, center, len));
        case Kind::Neg: return jc_neg(jet_node(*n.lhs, center, len));
        case Kind::Exp: return jc_exp(jet_node(*n.lhs, center, len));
        case Kind::Log: return jc_log(jet_node(*n.lhs, center, len));
        case Kind::Sqrt: return jc_sqrt(jet_node(*n.lhs, center, len));
        case Kind::Sin: return jc_sincos(jet_node(*n.lhs, center, len), true);
        case Kind::Cos: return jc_sincos(jet_node(*n.lhs, center, len), false);
        case Kind::Pow: {
            Coeffs u = jet_node(*n.lhs, center, len);
            if (n.rhs->kind == Kind::Literal) {
                double e = n.rhs->value;
                if (integral_exponent(e) && std::abs(e) <= 1e9) {
                    return jc_powi(u, static_cast<long long>(e));
                }
                if (u[0] > 0.0) return jc_exp(jc_scale(jc_log(u), e));
                if (len == 1) return jc_const(scalar_pow(u[0], e), 1);
                throw DomainError("pow", u[0]);
            }
            Coeffs v = jet_node(*n.rhs, center, len);
            if (u[0] > 0.0) return jc_exp(jc_mul(v, jc_log(u)));
            if (len == 1) return jc_const(scalar_pow(u[0], v[0]), 1);
            throw DomainError("pow", u[0]);
        }
    }
    throw Error("corrupt expression node");
}

// ---------------------------------------------------------------------------
// printing

std::string literal_text(double v, const char* fmt) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), fmt, v);
    return buf;
}

void render_node(const Node& n, std::string& out) {
    auto binary = [&](const char* op) {
        out += '(';
        render_node(*n.lhs, out);
        out += ' ';
        out += op;
        out += ' ';
        render_node(*n.rhs, out);
        out += ')';
    };
    auto call = [&](const char* name) {
        out += name;
        out += '(';
        render_node(*n.lhs, out);
        out += ')';
    };
    switch (n.kind) {
        case Kind::Literal: out += literal_text(n.value, "%.17g"); return;
        case Kind::Var: out += 'x'; return;
        case Kind::Add: binary("+"); return;
        case Kind::Sub: binary("-"); return;
        case Kind::Mul: binary("*"); return;
        case Kind::Div: binary("/"); return;
        case Kind::Pow: binary("^"); return;
        case Kind::Neg:
            out += "(-";
            render_node(*n.lhs, out);
            out += ')';
            return;
        case Kind::Exp: call("exp"); return;
        case Kind::Log: call("log"); return;
        case Kind::Sqrt: call("sqrt"); return;
        case Kind::Sin: call("sin"); return;
        case Kind::Cos: call("cos"); return;
    }
}

void dump_node(const Node& n, std::string& out) {
    auto compound = [&](const char* tag) {
        out += '(';
        out += tag;
        out += ' ';
        dump_node(*n.lhs, out);
        if (n.rhs) {
            out += ' ';
            dump_node(*n.rhs, out);
        }
        out += ')';
    };
    switch (n.kind) {
        case Kind::Literal: out += literal_text(n.value, "%g"); return;
        case Kind::Var: out += 'x'; return;
        case Kind::Add: compound("+"); return;
        case Kind::Sub: compound("-"); return;
        case Kind::Mul: compound("*"); return;
        case Kind::Div: compound("/"); return;
        case Kind::Pow: compound("^"); return;
        case Kind::Neg: compound("neg"); return;
        case Kind::Exp: compound("exp"); return;
        case Kind::Log: compound("log"); return;
        case Kind::Sqrt: compound("sqrt"); return;
        case Kind::Sin: compound("sin"); return;
        case Kind::Cos: compound("cos"); return;
    }
}

}  // namespace

Expr Expr::parse(std::string_view text) {
    Parser p(text);
    return Expr(p.run());
}

double Expr::eval(double x) const {
    return eval_node(*root_, x);
}

Jet Expr::jet_eval(double center, int order) const {
    if (order < 0) throw Error("jet order must be nonnegative");
    Jet jet;
    jet.center = center;
    jet.coeffs = jet_node(*root_, center, static_cast<std::size_t>(order) + 1);
    return jet;
}

double Expr::derivative(double x0, int k) const {
    if (k < 0) throw Error("derivative order must be nonnegative");
    return jet_eval(x0, k).derivative(k);
}

std::string Expr::render() const {
    std::string out;
    render_node(*root_, out);
    return out;
}

std::string Expr::dump() const {
    std::string out;
    dump_node(*root_, out);
    return out;
}

}  // namespace laplace
