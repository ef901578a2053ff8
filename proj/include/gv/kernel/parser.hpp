#pragma once

#include "gv/kernel/poly.hpp"

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>

namespace gv {

namespace detail {

// expr   := term (('+'|'-') term)*
// term   := unary (('*'|'/') unary)*        division only by nonzero constants
// unary  := ('+'|'-') unary | power
// power  := atom ('^' integer)?
// atom   := integer | identifier | '(' expr ')'
class ExpressionParser {
  public:
    ExpressionParser(std::string_view text, ChartPtr chart, std::size_t line, std::size_t column)
        : text_(text), chart_(std::move(chart)), line0_(line), column0_(column) {}

    Poly parse() {
        skip_space();
        if (at_end()) fail("empty expression");
        Poly p = expr();
        skip_space();
        if (!at_end()) fail(std::string("unexpected '") + text_[pos_] + "'");
        return p;
    }

  private:
    Poly expr() {
        Poly acc = term();
        for (;;) {
            skip_space();
            if (accept('+')) {
                acc += term();
            } else if (accept('-')) {
                acc -= term();
            } else {
                return acc;
            }
        }
    }

    Poly term() {
        Poly acc = unary();
        for (;;) {
            skip_space();
            if (accept('*')) {
                acc = acc * unary();
            } else if (peek() == '/') {
                const std::size_t at = pos_;
                ++pos_;
                Poly d = unary();
                if (!d.is_constant() || d.is_zero()) fail_at(at, "division by a non-constant or zero");
                acc *= Scalar(1) / d.constant_term();
            } else {
                return acc;
            }
        }
    }

    Poly unary() {
        skip_space();
        if (accept('-')) return -unary();
        if (accept('+')) return unary();
        return power();
    }

    Poly power() {
        const std::size_t start = pos_;
        bool single_odd_variable = false;
        Poly base = atom(single_odd_variable);
        skip_space();
        if (!accept('^')) return base;
        skip_space();
        const std::size_t at = pos_;
        if (at_end() || !std::isdigit(static_cast<unsigned char>(peek()))) fail("expected an exponent");
        unsigned long e = 0;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
            e = e * 10 + static_cast<unsigned long>(text_[pos_++] - '0');
            if (e > 1000) fail_at(at, "exponent too large");
        }
        if (e >= 2 && single_odd_variable)
            throw NormalizationError("odd variable raised to a power",
                                     std::string(text_.substr(start, pos_ - start)));
        Poly r = Poly::constant(chart_, 1);
        for (unsigned long k = 0; k < e; ++k) r = r * base;
        return r;
    }

    Poly atom(bool& single_odd_variable) {
        skip_space();
        if (at_end()) fail("unexpected end of expression");
        const char c = peek();
        if (c == '(') {
            ++pos_;
            Poly inner = expr();
            skip_space();
            if (!accept(')')) fail("expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string digits;
            while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) digits += text_[pos_++];
            return Poly::constant(chart_, Scalar(mpz_class(digits)));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            std::string name;
            while (!at_end()) {
                const char d = peek();
                if (std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '\'') {
                    name += d;
                    ++pos_;
                } else {
                    break;
                }
            }
            auto idx = chart_->find(name);
            if (!idx) fail_at(start, "unknown identifier '" + name + "'");
            single_odd_variable = chart_->odd(*idx);
            return Poly::variable(chart_, *idx);
        }
        fail(std::string("unexpected '") + c + "'");
    }

    [[noreturn]] void fail(const std::string& what) const { fail_at(pos_, what); }
    [[noreturn]] void fail_at(std::size_t at, const std::string& what) const {
        std::size_t line = line0_, col = column0_;
        for (std::size_t k = 0; k < at && k < text_.size(); ++k) {
            if (text_[k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError(what, line, col);
    }

    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return at_end() ? '\0' : text_[pos_]; }
    bool accept(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void skip_space() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
    }

    std::string_view text_;
    ChartPtr chart_;
    std::size_t pos_ = 0;
    std::size_t line0_;
    std::size_t column0_;
};

} // namespace detail

/// Parses an expression in the input grammar. `line`/`column` locate the
/// first character for error messages.
inline Poly parse_poly(std::string_view text, const ChartPtr& chart, std::size_t line = 1,
                       std::size_t column = 1) {
    return detail::ExpressionParser(text, chart, line, column).parse();
}

} // namespace gv
