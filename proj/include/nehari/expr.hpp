#pragma once

#include <cctype>
#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "nehari/errors.hpp"

namespace nehari {

// Minimal arithmetic grammar over x, y, z with sin, cos, exp, sqrt, abs,
// the constant pi, and + - * / ^.  Used for potential and coupling
// expressions in configuration files.
namespace expr_detail {

enum class NodeKind { Constant, Var, Unary, Binary };

struct Node {
    NodeKind kind;
    double constant = 0.0;
    int var = 0;      // 0=x 1=y 2=z
    char op = 0;      // binary: + - * / ^ ; unary: function id below
    int fn = 0;       // 0=neg 1=sin 2=cos 3=exp 4=sqrt 5=abs
    std::unique_ptr<Node> lhs, rhs;

    double eval(double x, double y, double z) const {
        switch (kind) {
            case NodeKind::Constant: return constant;
            case NodeKind::Var: return var == 0 ? x : (var == 1 ? y : z);
            case NodeKind::Unary: {
                const double a = lhs->eval(x, y, z);
                switch (fn) {
                    case 0: return -a;
                    case 1: return std::sin(a);
                    case 2: return std::cos(a);
                    case 3: return std::exp(a);
                    case 4: return std::sqrt(a);
                    default: return std::abs(a);
                }
            }
            case NodeKind::Binary: {
                const double a = lhs->eval(x, y, z);
                const double b = rhs->eval(x, y, z);
                switch (op) {
                    case '+': return a + b;
                    case '-': return a - b;
                    case '*': return a * b;
                    case '/': return a / b;
                    default: return std::pow(a, b);
                }
            }
        }
        return 0.0;
    }
};

using NodePtr = std::unique_ptr<Node>;

class Parser {
public:
    explicit Parser(std::string src) : src_(std::move(src)) {}

    NodePtr parse() {
        auto n = parse_sum();
        skip_ws();
        if (pos_ != src_.size()) fail("unexpected trailing input");
        return n;
    }

private:
    std::string src_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw config_error("expression error at column " + std::to_string(pos_ + 1) + ": " + what +
                           " in \"" + src_ + "\"");
    }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool consume(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    NodePtr parse_sum() {
        auto lhs = parse_term();
        for (;;) {
            if (consume('+'))
                lhs = make_binary('+', std::move(lhs), parse_term());
            else if (consume('-'))
                lhs = make_binary('-', std::move(lhs), parse_term());
            else
                return lhs;
        }
    }

    NodePtr parse_term() {
        auto lhs = parse_unary();
        for (;;) {
            if (consume('*'))
                lhs = make_binary('*', std::move(lhs), parse_unary());
            else if (consume('/'))
                lhs = make_binary('/', std::move(lhs), parse_unary());
            else
                return lhs;
        }
    }

    NodePtr parse_unary() {
        if (consume('-')) {
            auto n = std::make_unique<Node>();
            n->kind = NodeKind::Unary;
            n->fn = 0;
            n->lhs = parse_unary();
            return n;
        }
        consume('+');
        return parse_power();
    }

    NodePtr parse_power() {
        auto base = parse_primary();
        if (consume('^')) {
            // right-associative
            return make_binary('^', std::move(base), parse_unary());
        }
        return base;
    }

    NodePtr parse_primary() {
        skip_ws();
        if (pos_ >= src_.size()) fail("unexpected end of expression");
        const char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
        if (c == '(') {
            ++pos_;
            auto n = parse_sum();
            if (!consume(')')) fail("missing ')'");
            return n;
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    NodePtr parse_number() {
        std::size_t end = pos_;
        while (end < src_.size() &&
               (std::isdigit(static_cast<unsigned char>(src_[end])) || src_[end] == '.' ||
                src_[end] == 'e' || src_[end] == 'E' ||
                ((src_[end] == '+' || src_[end] == '-') && end > pos_ &&
                 (src_[end - 1] == 'e' || src_[end - 1] == 'E'))))
            ++end;
        try {
            std::size_t used = 0;
            const double val = std::stod(src_.substr(pos_, end - pos_), &used);
            pos_ += used;
            auto n = std::make_unique<Node>();
            n->kind = NodeKind::Constant;
            n->constant = val;
            return n;
        } catch (const std::exception&) {
            fail("malformed number");
        }
    }

    NodePtr parse_ident() {
        std::size_t end = pos_;
        while (end < src_.size() && std::isalpha(static_cast<unsigned char>(src_[end]))) ++end;
        const std::string name = src_.substr(pos_, end - pos_);
        pos_ = end;
        if (name == "x" || name == "y" || name == "z") {
            auto n = std::make_unique<Node>();
            n->kind = NodeKind::Var;
            n->var = name == "x" ? 0 : (name == "y" ? 1 : 2);
            return n;
        }
        if (name == "pi") {
            auto n = std::make_unique<Node>();
            n->kind = NodeKind::Constant;
            n->constant = 3.14159265358979323846;
            return n;
        }
        int fn = -1;
        if (name == "sin") fn = 1;
        else if (name == "cos") fn = 2;
        else if (name == "exp") fn = 3;
        else if (name == "sqrt") fn = 4;
        else if (name == "abs") fn = 5;
        if (fn < 0) fail("unknown identifier '" + name + "'");
        if (!consume('(')) fail("expected '(' after function name");
        auto arg = parse_sum();
        if (!consume(')')) fail("missing ')'");
        auto n = std::make_unique<Node>();
        n->kind = NodeKind::Unary;
        n->fn = fn;
        n->lhs = std::move(arg);
        return n;
    }

    static NodePtr make_binary(char op, NodePtr lhs, NodePtr rhs) {
        auto n = std::make_unique<Node>();
        n->kind = NodeKind::Binary;
        n->op = op;
        n->lhs = std::move(lhs);
        n->rhs = std::move(rhs);
        return n;
    }
};

} // namespace expr_detail

// Compiles an expression string into a callable f(x, y, z).
inline std::function<double(double, double, double)> compile_expression(const std::string& src) {
    auto root = std::make_shared<expr_detail::NodePtr>(expr_detail::Parser(src).parse());
    return [root](double x, double y, double z) { return (*root)->eval(x, y, z); };
}

} // namespace nehari
