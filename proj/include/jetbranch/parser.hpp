// Recursive-descent parser for curve expressions over x, y (and univariate
// t-expressions for parametrizations). Integer coefficients, +, -, *, ^ and
// parentheses; errors carry the offending position.
#pragma once

#include <cctype>
#include <string>
#include <vector>

#include "jetbranch/numeric.hpp"
#include "jetbranch/polynomial.hpp"

namespace jetbranch {

namespace detail {

class ExpressionParser {
public:
    ExpressionParser(const std::string& text, bool univariate_t)
        : text_(text), t_mode_(univariate_t) {}

    Poly parse() {
        Poly p = expression();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return p;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw Error(Error::Kind::validation,
                    std::string(t_mode_ ? "parametrization" : "curve expression") +
                        ": syntax error at position " + std::to_string(pos_ + 1) + ": " + what);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    Poly expression() {
        bool neg = false;
        skip_ws();
        while (true) {
            if (eat('-'))
                neg = !neg;
            else if (eat('+'))
                ;
            else
                break;
        }
        Poly acc = product();
        if (neg) acc = -acc;
        while (true) {
            char c = peek();
            if (c == '+') {
                ++pos_;
                acc += product();
            } else if (c == '-') {
                ++pos_;
                acc -= product();
            } else {
                break;
            }
        }
        return acc;
    }

    Poly product() {
        Poly acc = power();
        while (eat('*')) acc *= power();
        return acc;
    }

    Poly power() {
        bool neg = false;
        while (true) {
            if (eat('-'))
                neg = !neg;
            else if (eat('+'))
                ;
            else
                break;
        }
        Poly base = atom();
        while (eat('^')) {
            skip_ws();
            if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
                fail("exponent must be a nonnegative integer");
            Int e = integer();
            if (e > 100000) fail("exponent too large");
            base = base.pow(static_cast<int>(e.get_si()));
        }
        return neg ? -base : base;
    }

    Poly atom() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Poly inner = expression();
            if (!eat(')')) fail("expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return Poly(Rat(integer()));
        if (t_mode_) {
            if (c == 't') {
                ++pos_;
                return Poly::variable(var_x());  // t is carried on the x slot
            }
            fail("expected an integer, 't' or '('");
        }
        if (c == 'x') {
            ++pos_;
            return Poly::variable(var_x());
        }
        if (c == 'y') {
            ++pos_;
            return Poly::variable(var_y());
        }
        fail("expected an integer, 'x', 'y' or '('");
    }

    Int integer() {
        std::string digits;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
            digits += text_[pos_++];
        if (digits.empty()) fail("expected an integer");
        return Int(digits);
    }

    const std::string& text_;
    size_t pos_ = 0;
    bool t_mode_;
};

}  // namespace detail

inline Poly parse_curve(const std::string& text) {
    return detail::ExpressionParser(text, false).parse();
}

// Truncated/exact power-series pair (x(t), y(t)) with rational coefficients.
// `exact` means the listed terms are the whole series; otherwise coefficients
// are valid modulo t^trunc.
struct Parametrization {
    std::vector<Rat> x;
    std::vector<Rat> y;
    bool exact = true;
    long trunc = 0;
};

// Grammar: "t^4, t^6+t^9" with optional "@trunc=N".
inline Parametrization parse_parametrization(const std::string& text) {
    std::string body = text;
    Parametrization par;
    if (auto at = text.find('@'); at != std::string::npos) {
        body = text.substr(0, at);
        std::string tail = text.substr(at + 1);
        const std::string key = "trunc=";
        size_t k = tail.find(key);
        if (k == std::string::npos)
            throw Error(Error::Kind::validation,
                        "parametrization: expected \"@trunc=N\", got \"@" + tail + "\"");
        try {
            par.trunc = std::stoll(tail.substr(k + key.size()));
        } catch (...) {
            throw Error(Error::Kind::validation, "parametrization: bad truncation order");
        }
        if (par.trunc < 1)
            throw Error(Error::Kind::validation, "parametrization: truncation order must be >= 1");
        par.exact = false;
    }
    auto comma = body.find(',');
    if (comma == std::string::npos)
        throw Error(Error::Kind::validation,
                    "parametrization: expected \"x(t), y(t)\" separated by a comma");
    auto to_series = [&](const std::string& part) {
        Poly p = detail::ExpressionParser(part, true).parse();
        std::vector<Rat> coeffs;
        for (auto& [m, c] : p.terms()) {
            int deg = m.total_degree();
            if (static_cast<size_t>(deg) >= coeffs.size()) coeffs.resize(static_cast<size_t>(deg) + 1);
            coeffs[static_cast<size_t>(deg)] = c;
        }
        return coeffs;
    };
    par.x = to_series(body.substr(0, comma));
    par.y = to_series(body.substr(comma + 1));
    if (!par.exact) {
        if (static_cast<long>(par.x.size()) > par.trunc) par.x.resize(static_cast<size_t>(par.trunc));
        if (static_cast<long>(par.y.size()) > par.trunc) par.y.resize(static_cast<size_t>(par.trunc));
    }
    return par;
}

}  // namespace jetbranch
