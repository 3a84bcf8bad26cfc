#pragma once

#include <cctype>
#include <cstdlib>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "jet.hpp"

namespace nullrig {

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Immutable expression tree over +, -, *, /, unary minus, sqrt and integer
// powers.  Two evaluators on purpose: value() walks the tree in plain
// doubles, jet() walks it in jet arithmetic.  Checks that pit derivatives
// against finite differences rely on value() never touching jet code.
class Expr {
public:
    enum class Op { Const, Var, Add, Sub, Mul, Div, Neg, Sqrt, Pow };

    static ExprPtr constant(double c) {
        auto e = std::make_shared<Expr>();
        e->op_ = Op::Const;
        e->c_ = c;
        return e;
    }
    static ExprPtr variable(int index) {
        auto e = std::make_shared<Expr>();
        e->op_ = Op::Var;
        e->var_ = index;
        return e;
    }
    static ExprPtr add(ExprPtr a, ExprPtr b) { return binary(Op::Add, std::move(a), std::move(b)); }
    static ExprPtr sub(ExprPtr a, ExprPtr b) { return binary(Op::Sub, std::move(a), std::move(b)); }
    static ExprPtr mul(ExprPtr a, ExprPtr b) { return binary(Op::Mul, std::move(a), std::move(b)); }
    static ExprPtr div(ExprPtr a, ExprPtr b) { return binary(Op::Div, std::move(a), std::move(b)); }
    static ExprPtr neg(ExprPtr a) { return binary(Op::Neg, std::move(a), nullptr); }
    static ExprPtr sqrt(ExprPtr a) { return binary(Op::Sqrt, std::move(a), nullptr); }
    static ExprPtr pow(ExprPtr a, int k) {
        auto e = std::make_shared<Expr>();
        e->op_ = Op::Pow;
        e->a_ = std::move(a);
        e->k_ = k;
        return e;
    }

    double value(const std::vector<double>& x) const {
        switch (op_) {
            case Op::Const: return c_;
            case Op::Var:
                if (var_ >= int(x.size())) throw DimensionMismatch("expression variable beyond point dimension");
                return x[var_];
            case Op::Add: return a_->value(x) + b_->value(x);
            case Op::Sub: return a_->value(x) - b_->value(x);
            case Op::Mul: return a_->value(x) * b_->value(x);
            case Op::Div: {
                double d = b_->value(x);
                if (d == 0.0) throw DomainError("division by zero at " + point_str(x.data(), int(x.size())));
                return a_->value(x) / d;
            }
            case Op::Neg: return -a_->value(x);
            case Op::Sqrt: {
                double v = a_->value(x);
                if (v < 0.0) throw DomainError("sqrt of negative value at " + point_str(x.data(), int(x.size())));
                return std::sqrt(v);
            }
            case Op::Pow: {
                double v = a_->value(x);
                if (k_ < 0 && v == 0.0) throw DomainError("negative power of zero at " + point_str(x.data(), int(x.size())));
                double r = 1.0;
                int e = k_ < 0 ? -k_ : k_;
                for (int i = 0; i < e; ++i) r *= v;
                return k_ < 0 ? 1.0 / r : r;
            }
        }
        throw DomainError("corrupt expression node");
    }

    Jet3 jet(const std::vector<double>& x, int order = 3) const {
        const int n = int(x.size());
        switch (op_) {
            case Op::Const: return Jet3::constant(n, c_, order);
            case Op::Var:
                if (var_ >= n) throw DimensionMismatch("expression variable beyond point dimension");
                return Jet3::variable(n, var_, x[var_], order);
            case Op::Add: return a_->jet(x, order) + b_->jet(x, order);
            case Op::Sub: return a_->jet(x, order) - b_->jet(x, order);
            case Op::Mul: return a_->jet(x, order) * b_->jet(x, order);
            case Op::Div: return a_->jet(x, order) / b_->jet(x, order);
            case Op::Neg: return -a_->jet(x, order);
            case Op::Sqrt: return nullrig::sqrt(a_->jet(x, order));
            case Op::Pow: return pow_int(a_->jet(x, order), k_);
        }
        throw DomainError("corrupt expression node");
    }

private:
    static ExprPtr binary(Op op, ExprPtr a, ExprPtr b) {
        auto e = std::make_shared<Expr>();
        e->op_ = op;
        e->a_ = std::move(a);
        e->b_ = std::move(b);
        return e;
    }

    Op op_ = Op::Const;
    double c_ = 0.0;
    int var_ = -1;
    int k_ = 0;
    ExprPtr a_, b_;
};

// Maps a variable name to its slot; throws ConfigError for unknown names.
using VarResolver = std::function<int(const std::string&)>;

inline VarResolver chart_vars(int n) {
    return [n](const std::string& name) {
        if (name.size() >= 2 && name[0] == 'u') {
            int k = std::atoi(name.c_str() + 1);
            if (k >= 1 && k <= n && name == "u" + std::to_string(k)) return k - 1;
        }
        throw ConfigError("unknown chart variable '" + name + "' (expected u1..u" + std::to_string(n) + ")");
    };
}

inline VarResolver ambient_vars(int dim) {
    return [dim](const std::string& name) {
        if (name.size() >= 2 && name[0] == 'x') {
            int k = std::atoi(name.c_str() + 1);
            if (k >= 0 && k < dim && name == "x" + std::to_string(k)) return k;
        }
        throw ConfigError("unknown ambient variable '" + name + "' (expected x0..x" + std::to_string(dim - 1) + ")");
    };
}

inline VarResolver x0_only() {
    return [](const std::string& name) {
        if (name == "x0") return 0;
        throw ConfigError("unknown variable '" + name + "' (only x0 is in scope here)");
    };
}

namespace detail {

struct ExprParser {
    const std::string& s;
    const VarResolver& vars;
    std::size_t i = 0;

    void skip_ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }

    bool eat(char c) {
        skip_ws();
        if (i < s.size() && s[i] == c) { ++i; return true; }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) {
        throw ConfigError("expression parse error at offset " + std::to_string(i) + " in '" + s + "': " + what);
    }

    ExprPtr expr() {
        ExprPtr lhs = term();
        for (;;) {
            if (eat('+')) lhs = Expr::add(lhs, term());
            else if (eat('-')) lhs = Expr::sub(lhs, term());
            else return lhs;
        }
    }

    ExprPtr term() {
        ExprPtr lhs = factor();
        for (;;) {
            if (eat('*')) lhs = Expr::mul(lhs, factor());
            else if (eat('/')) lhs = Expr::div(lhs, factor());
            else return lhs;
        }
    }

    ExprPtr factor() {
        if (eat('-')) return Expr::neg(factor());
        return postfix();
    }

    ExprPtr postfix() {
        ExprPtr base = primary();
        skip_ws();
        if (i < s.size() && s[i] == '^') {
            ++i;
            skip_ws();
            bool negative = false;
            if (i < s.size() && s[i] == '-') { negative = true; ++i; }
            skip_ws();
            if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i]))) fail("expected integer exponent after '^'");
            int k = 0;
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) k = k * 10 + (s[i++] - '0');
            return Expr::pow(base, negative ? -k : k);
        }
        return base;
    }

    ExprPtr primary() {
        skip_ws();
        if (i >= s.size()) fail("unexpected end of input");
        char c = s[i];
        if (c == '(') {
            ++i;
            ExprPtr e = expr();
            if (!eat(')')) fail("missing ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* start = s.c_str() + i;
            char* end = nullptr;
            double v = std::strtod(start, &end);
            if (end == start) fail("bad number");
            i += std::size_t(end - start);
            return Expr::constant(v);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = i;
            while (i < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
            std::string name = s.substr(start, i - start);
            if (eat('(')) {
                if (name != "sqrt") fail("unknown function '" + name + "'");
                ExprPtr arg = expr();
                if (!eat(')')) fail("missing ')' after sqrt argument");
                return Expr::sqrt(arg);
            }
            return Expr::variable(vars(name));
        }
        fail(std::string("unexpected character '") + c + "'");
    }
};

}  // namespace detail

inline ExprPtr parse_expression(const std::string& text, const VarResolver& vars) {
    detail::ExprParser p{text, vars};
    ExprPtr e = p.expr();
    p.skip_ws();
    if (p.i != text.size()) p.fail("trailing input");
    return e;
}

inline Jet3 evaluate_jet(const Expr& e, const std::vector<double>& p, int order = 3) {
    return e.jet(p, order);
}

}  // namespace nullrig
