#pragma once

// Arithmetic formulas in one variable, used for eigenvalue tails and spectral
// transforms.
//
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := atom ('^' factor)?            right-associative
//   atom   := number | VAR | 'sqrt' '(' expr ')' | '(' expr ')' | '-' atom
//
// VAR is `j` unless another single-letter name is requested. Numbers are
// decimal with an optional fraction. Whitespace is ignored.

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "asymlim/error.hpp"

namespace asymlim {

class SyntaxError : public Error {
public:
    SyntaxError(std::size_t offset, std::vector<std::string> expected, const std::string& found)
        : Error(ErrorKind::SyntaxError, describe(offset, expected, found)),
          offset_(offset),
          expected_(std::move(expected)) {}

    std::size_t offset() const noexcept { return offset_; }
    const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
    static std::string describe(std::size_t offset, const std::vector<std::string>& expected,
                                const std::string& found) {
        std::string msg = "at byte " + std::to_string(offset) + ": expected one of {";
        for (std::size_t i = 0; i < expected.size(); ++i) msg += (i ? ", " : "") + expected[i];
        return msg + "}, found " + found;
    }

    std::size_t offset_;
    std::vector<std::string> expected_;
};

enum class BinaryOp { Add, Sub, Mul, Div, Pow };

class ExprAst {
public:
    enum class Kind { Literal, Variable, Negate, Binary, Sqrt };

    struct Node {
        Kind kind = Kind::Literal;
        double value = 0.0;
        BinaryOp op = BinaryOp::Add;
        std::shared_ptr<const Node> lhs;
        std::shared_ptr<const Node> rhs;
    };
    using NodePtr = std::shared_ptr<const Node>;

    ExprAst() : ExprAst(literal_node(0.0), 'j') {}
    ExprAst(NodePtr root, char variable) : root_(std::move(root)), variable_(variable) {}

    static NodePtr literal_node(double v) {
        return std::make_shared<const Node>(Node{Kind::Literal, v, BinaryOp::Add, nullptr, nullptr});
    }
    static NodePtr variable_node() {
        return std::make_shared<const Node>(Node{Kind::Variable, 0.0, BinaryOp::Add, nullptr, nullptr});
    }
    static NodePtr negate_node(NodePtr a) {
        return std::make_shared<const Node>(Node{Kind::Negate, 0.0, BinaryOp::Add, std::move(a), nullptr});
    }
    static NodePtr sqrt_node(NodePtr a) {
        return std::make_shared<const Node>(Node{Kind::Sqrt, 0.0, BinaryOp::Add, std::move(a), nullptr});
    }
    static NodePtr binary_node(BinaryOp op, NodePtr a, NodePtr b) {
        return std::make_shared<const Node>(Node{Kind::Binary, 0.0, op, std::move(a), std::move(b)});
    }

    const NodePtr& root() const noexcept { return root_; }
    char variable() const noexcept { return variable_; }

    friend bool operator==(const ExprAst& a, const ExprAst& b) { return same(a.root_, b.root_); }

    static bool same(const NodePtr& a, const NodePtr& b) {
        if (a == b) return true;
        if (!a || !b || a->kind != b->kind) return false;
        switch (a->kind) {
        case Kind::Literal: return a->value == b->value;
        case Kind::Variable: return true;
        case Kind::Negate:
        case Kind::Sqrt: return same(a->lhs, b->lhs);
        case Kind::Binary: return a->op == b->op && same(a->lhs, b->lhs) && same(a->rhs, b->rhs);
        }
        return false;
    }

private:
    NodePtr root_;
    char variable_;
};

namespace detail {

inline std::string format_literal(double v) {
    char buf[400];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed);
    return std::string(buf, res.ptr);
}

inline char op_symbol(BinaryOp op) {
    switch (op) {
    case BinaryOp::Add: return '+';
    case BinaryOp::Sub: return '-';
    case BinaryOp::Mul: return '*';
    case BinaryOp::Div: return '/';
    case BinaryOp::Pow: return '^';
    }
    return '?';
}

inline std::string print_node(const ExprAst::NodePtr& n, char var) {
    using K = ExprAst::Kind;
    switch (n->kind) {
    case K::Literal:
        if (n->value < 0) return "(-" + format_literal(-n->value) + ")";
        return format_literal(n->value);
    case K::Variable: return std::string(1, var);
    case K::Negate: return "(-" + print_node(n->lhs, var) + ")";
    case K::Sqrt: return "sqrt(" + print_node(n->lhs, var) + ")";
    case K::Binary:
        return "(" + print_node(n->lhs, var) + " " + op_symbol(n->op) + " " +
               print_node(n->rhs, var) + ")";
    }
    return "?";
}

class Parser {
public:
    Parser(std::string_view text, char var) : text_(text), var_(var) {}

    ExprAst::NodePtr parse_all() {
        auto node = expr();
        skip_ws();
        if (pos_ < text_.size()) fail({"'+'", "'-'", "'*'", "'/'", "'^'", "end of input"});
        return node;
    }

private:
    ExprAst::NodePtr expr() {
        auto lhs = term();
        for (;;) {
            skip_ws();
            if (accept('+')) lhs = ExprAst::binary_node(BinaryOp::Add, lhs, term());
            else if (accept('-')) lhs = ExprAst::binary_node(BinaryOp::Sub, lhs, term());
            else return lhs;
        }
    }

    ExprAst::NodePtr term() {
        auto lhs = factor();
        for (;;) {
            skip_ws();
            if (accept('*')) lhs = ExprAst::binary_node(BinaryOp::Mul, lhs, factor());
            else if (accept('/')) lhs = ExprAst::binary_node(BinaryOp::Div, lhs, factor());
            else return lhs;
        }
    }

    ExprAst::NodePtr factor() {
        auto base = atom();
        skip_ws();
        if (accept('^')) return ExprAst::binary_node(BinaryOp::Pow, base, factor());
        return base;
    }

    ExprAst::NodePtr atom() {
        skip_ws();
        if (pos_ >= text_.size()) fail(atom_starts());
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) return number();
        if (c == '(') {
            ++pos_;
            auto inner = expr();
            skip_ws();
            if (!accept(')')) fail({"')'"});
            return inner;
        }
        if (c == '-') {
            ++pos_;
            return ExprAst::negate_node(atom());
        }
        if (text_.substr(pos_, 4) == "sqrt") {
            pos_ += 4;
            skip_ws();
            if (!accept('(')) fail({"'('"});
            auto inner = expr();
            skip_ws();
            if (!accept(')')) fail({"')'"});
            return ExprAst::sqrt_node(std::move(inner));
        }
        if (c == var_ && !is_ident_char(pos_ + 1)) {
            ++pos_;
            return ExprAst::variable_node();
        }
        fail(atom_starts());
    }

    ExprAst::NodePtr number() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            const std::size_t frac = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            if (pos_ == frac) fail({"digit"});
        }
        double value = 0.0;
        const auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
        if (res.ec != std::errc() || !std::isfinite(value)) {
            pos_ = start;
            fail({"finite number"});
        }
        return ExprAst::literal_node(value);
    }

    std::vector<std::string> atom_starts() const {
        return {"number", std::string("'") + var_ + "'", "'sqrt'", "'('", "'-'"};
    }

    bool is_ident_char(std::size_t i) const {
        return i < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[i])) || text_[i] == '_');
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(std::vector<std::string> expected) const {
        const std::string found =
            pos_ < text_.size() ? "'" + std::string(1, text_[pos_]) + "'" : "end of input";
        throw SyntaxError(pos_, std::move(expected), found);
    }

    std::string_view text_;
    char var_;
    std::size_t pos_ = 0;
};

inline double eval_node(const ExprAst::NodePtr& n, double x, char var) {
    using K = ExprAst::Kind;
    switch (n->kind) {
    case K::Literal: return n->value;
    case K::Variable: return x;
    case K::Negate: return -eval_node(n->lhs, x, var);
    case K::Sqrt: {
        const double a = eval_node(n->lhs, x, var);
        if (a < 0.0)
            throw Error(ErrorKind::DomainError,
                        "sqrt of negative value " + std::to_string(a) + " in " + print_node(n, var));
        return std::sqrt(a);
    }
    case K::Binary: {
        const double a = eval_node(n->lhs, x, var);
        const double b = eval_node(n->rhs, x, var);
        switch (n->op) {
        case BinaryOp::Add: return a + b;
        case BinaryOp::Sub: return a - b;
        case BinaryOp::Mul: return a * b;
        case BinaryOp::Div:
            if (b == 0.0)
                throw Error(ErrorKind::DivisionByZero, "zero denominator in " + print_node(n, var));
            return a / b;
        case BinaryOp::Pow: {
            const double r = std::pow(a, b);
            if (!std::isfinite(r))
                throw Error(ErrorKind::DomainError,
                            "power is undefined or overflows in " + print_node(n, var));
            return r;
        }
        }
    }
    }
    return 0.0;
}

inline ExprAst::NodePtr substitute_node(const ExprAst::NodePtr& n, const ExprAst::NodePtr& repl) {
    using K = ExprAst::Kind;
    switch (n->kind) {
    case K::Literal: return n;
    case K::Variable: return repl;
    case K::Negate: return ExprAst::negate_node(substitute_node(n->lhs, repl));
    case K::Sqrt: return ExprAst::sqrt_node(substitute_node(n->lhs, repl));
    case K::Binary:
        return ExprAst::binary_node(n->op, substitute_node(n->lhs, repl), substitute_node(n->rhs, repl));
    }
    return n;
}

}  // namespace detail

inline ExprAst parse(std::string_view text, char variable = 'j') {
    return ExprAst(detail::Parser(text, variable).parse_all(), variable);
}

/// Fully parenthesized canonical form; parse(print(e)) == e.
inline std::string print(const ExprAst& e) { return detail::print_node(e.root(), e.variable()); }

/// Value at a real argument (used for transforms g(t)).
inline double eval_real(const ExprAst& e, double x) {
    return detail::eval_node(e.root(), x, e.variable());
}

inline double eval(const ExprAst& e, std::int64_t j) {
    return eval_real(e, static_cast<double>(j));
}

/// outer(inner(x)): every occurrence of outer's variable is replaced by inner.
inline ExprAst compose(const ExprAst& outer, const ExprAst& inner) {
    return ExprAst(detail::substitute_node(outer.root(), inner.root()), inner.variable());
}

}  // namespace asymlim
