#pragma once

#include <cctype>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperalg/mpoly.hpp"
#include "hyperalg/symbol.hpp"

namespace hyperalg {

/// Complex literal: "1", "-2.5", "1+2i", "0.5-0.25i", "2i", "i", "-i".
inline cplx parse_complex(const std::string& text) {
    std::size_t pos = 0;
    const auto skip_ws = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    };
    const auto number = [&](double& out, bool& was_bare_i) -> bool {
        skip_ws();
        was_bare_i = false;
        std::size_t start = pos;
        double sign = 1.0;
        if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
            if (text[pos] == '-') sign = -1.0;
            ++pos;
        }
        skip_ws();
        if (pos < text.size() && (text[pos] == 'i' || text[pos] == 'I')) {
            ++pos;
            out = sign;
            was_bare_i = true;
            return true;
        }
        std::size_t digits = pos;
        while (pos < text.size() &&
               (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.' ||
                text[pos] == 'e' || text[pos] == 'E' ||
                ((text[pos] == '+' || text[pos] == '-') && pos > digits &&
                 (text[pos - 1] == 'e' || text[pos - 1] == 'E'))))
            ++pos;
        if (pos == digits) {
            pos = start;
            return false;
        }
        out = sign * std::stod(text.substr(digits, pos - digits));
        return true;
    };

    double re = 0.0, im = 0.0;
    double first = 0.0;
    bool bare_i = false;
    if (!number(first, bare_i)) throw std::invalid_argument("bad complex literal: " + text);
    skip_ws();
    if (pos < text.size() && (text[pos] == 'i' || text[pos] == 'I') && !bare_i) {
        ++pos;
        im = first;
    } else if (bare_i) {
        im = first;
    } else {
        re = first;
        skip_ws();
        if (pos < text.size()) {
            double second = 0.0;
            bool second_bare = false;
            if (!number(second, second_bare)) throw std::invalid_argument("bad complex literal: " + text);
            skip_ws();
            if (second_bare) {
                im = second;
            } else if (pos < text.size() && (text[pos] == 'i' || text[pos] == 'I')) {
                ++pos;
                im = second;
            } else {
                throw std::invalid_argument("bad complex literal (missing i): " + text);
            }
        }
    }
    skip_ws();
    if (pos != text.size()) throw std::invalid_argument("trailing characters in complex literal: " + text);
    return {re, im};
}

/// "re,im" pair (used for seeds and plain points).
inline cplx parse_complex_pair(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) return {std::stod(text), 0.0};
    return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
}

/// Operator symbol mini-grammar: poly:c0,c1,...  exp:a  sin:a  cos:a, with
/// complex scalars in the parse_complex syntax; bare exp/sin/cos mean a = 1.
inline Symbol parse_symbol_spec(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    const std::string rest = colon == std::string::npos ? std::string{} : spec.substr(colon + 1);
    if (head == "poly") {
        if (rest.empty()) throw std::invalid_argument("poly spec needs coefficients");
        std::vector<cplx> coeffs;
        std::size_t start = 0;
        while (start <= rest.size()) {
            const auto comma = rest.find(',', start);
            const std::string piece =
                rest.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
            coeffs.push_back(parse_complex(piece));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        return Symbol::polynomial(std::move(coeffs));
    }
    const cplx a = rest.empty() ? cplx(1.0, 0.0) : parse_complex(rest);
    if (head == "exp") return Symbol::exponential(a);
    if (head == "sin") return Symbol::sine(a);
    if (head == "cos") return Symbol::cosine(a);
    throw std::invalid_argument("unknown symbol spec: " + spec);
}

namespace parse_detail {

struct PolyParser {
    const std::string& text;
    std::size_t pos = 0;
    std::uint32_t nvars;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& what) {
        throw std::invalid_argument("polynomial parse error at position " + std::to_string(pos) +
                                    ": " + what);
    }

    long long integer() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == start) fail("expected an integer");
        return std::stoll(text.substr(start, pos - start));
    }

    // factor := INT | tK (^ INT)?
    RationalPoly factor() {
        skip_ws();
        if (pos < text.size() && (text[pos] == 't' || text[pos] == 'T')) {
            ++pos;
            const long long idx = integer();
            if (idx < 1 || static_cast<std::uint32_t>(idx) > nvars) fail("variable index out of range");
            RationalPoly v = RationalPoly::variable(nvars, static_cast<std::uint32_t>(idx - 1));
            if (eat('^')) {
                const long long e = integer();
                if (e < 0) fail("negative exponent");
                return v.pow(static_cast<std::uint64_t>(e));
            }
            return v;
        }
        if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
            return RationalPoly::constant(nvars, Rational(BigInt(integer())));
        fail("expected a factor");
    }

    RationalPoly term() {
        RationalPoly acc = factor();
        while (eat('*')) acc = acc * factor();
        return acc;
    }

    RationalPoly expr() {
        skip_ws();
        bool negate = false;
        if (eat('-')) negate = true;
        else eat('+');
        RationalPoly acc = term();
        if (negate) acc = -acc;
        while (true) {
            skip_ws();
            if (eat('+')) {
                acc = acc + term();
            } else if (eat('-')) {
                acc = acc - term();
            } else {
                break;
            }
        }
        skip_ws();
        if (pos != text.size()) fail("trailing input");
        return acc;
    }
};

}  // namespace parse_detail

inline std::uint32_t max_variable_index(const std::string& text) {
    std::uint32_t best = 0;
    for (std::size_t i = 0; i + 1 < text.size(); ++i) {
        if ((text[i] == 't' || text[i] == 'T') &&
            std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
            std::size_t j = i + 1;
            std::uint32_t v = 0;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j])))
                v = v * 10 + static_cast<std::uint32_t>(text[j++] - '0');
            best = std::max(best, v);
        }
    }
    return best;
}

/// Naive infix polynomials over t1..tN with integer coefficients:
/// "t1^2", "t1*t2+t1", "2*t1^2-3*t2", "1+t1".
inline RationalPoly parse_poly_spec(const std::string& text, std::uint32_t nvars = 0) {
    if (nvars == 0) nvars = std::max(1u, max_variable_index(text));
    parse_detail::PolyParser p{text, 0, nvars};
    return p.expr();
}

}  // namespace hyperalg
