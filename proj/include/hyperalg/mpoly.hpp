#pragma once

#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hyperalg/multiindex.hpp"
#include "hyperalg/rational.hpp"

namespace hyperalg {

/// Multivariate polynomial with exact coefficients (Rational or
/// GaussianRational).  Terms are stored in graded-lex order with no zero
/// coefficients, so the representation is canonical and equality is
/// structural.
template <class C>
class MPoly {
public:
    using coeff_type = C;
    using term_map = std::map<MultiIndex, C, GrlexLess>;

    MPoly() = default;
    explicit MPoly(std::uint32_t nvars) : nvars_(nvars) {}

    static MPoly zero(std::uint32_t nvars) { return MPoly(nvars); }

    static MPoly constant(std::uint32_t nvars, C value) {
        MPoly p(nvars);
        p.add_term(MultiIndex(nvars, 0), std::move(value));
        return p;
    }

    // t_i (zero-based index)
    static MPoly variable(std::uint32_t nvars, std::uint32_t i) {
        if (i >= nvars) throw std::out_of_range("variable index out of range");
        MPoly p(nvars);
        MultiIndex e(nvars, 0);
        e[i] = 1;
        p.add_term(e, C(1));
        return p;
    }

    static MPoly monomial(std::uint32_t nvars, MultiIndex exps, C value) {
        if (exps.size() != nvars) throw std::invalid_argument("monomial exponent dimension mismatch");
        MPoly p(nvars);
        p.add_term(std::move(exps), std::move(value));
        return p;
    }

    std::uint32_t nvars() const { return nvars_; }
    const term_map& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    std::uint64_t degree() const {
        std::uint64_t d = 0;
        for (const auto& [e, c] : terms_) d = std::max(d, l1_norm(e));
        return d;
    }

    C constant_term() const {
        const auto it = terms_.find(MultiIndex(nvars_, 0));
        return it == terms_.end() ? C(0) : it->second;
    }

    C coeff(const MultiIndex& e) const {
        const auto it = terms_.find(e);
        return it == terms_.end() ? C(0) : it->second;
    }

    void add_term(MultiIndex e, C value) {
        if (e.size() != nvars_) throw std::invalid_argument("term exponent dimension mismatch");
        if (value == C(0)) return;
        const auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_.emplace(std::move(e), std::move(value));
        } else {
            it->second += value;
            if (it->second == C(0)) terms_.erase(it);
        }
    }

    friend MPoly operator+(const MPoly& a, const MPoly& b) {
        check_dims(a, b);
        MPoly out = a;
        for (const auto& [e, c] : b.terms_) out.add_term(e, c);
        return out;
    }
    friend MPoly operator-(const MPoly& a, const MPoly& b) {
        check_dims(a, b);
        MPoly out = a;
        for (const auto& [e, c] : b.terms_) out.add_term(e, C(0) - c);
        return out;
    }
    friend MPoly operator*(const MPoly& a, const MPoly& b) {
        check_dims(a, b);
        MPoly out(a.nvars_);
        for (const auto& [ea, ca] : a.terms_) {
            for (const auto& [eb, cb] : b.terms_) {
                MultiIndex e(a.nvars_);
                for (std::uint32_t i = 0; i < a.nvars_; ++i) e[i] = ea[i] + eb[i];
                out.add_term(std::move(e), ca * cb);
            }
        }
        return out;
    }
    MPoly operator*(const C& s) const {
        MPoly out(nvars_);
        if (s == C(0)) return out;
        for (const auto& [e, c] : terms_) out.terms_.emplace(e, c * s);
        return out;
    }
    MPoly operator-() const { return *this * C(-1); }

    MPoly pow(std::uint64_t n) const {
        MPoly result = constant(nvars_, C(1));
        MPoly base = *this;
        while (n > 0) {
            if (n & 1u) result = result * base;
            if (n >>= 1u) base = base * base;
        }
        return result;
    }

    friend bool operator==(const MPoly& a, const MPoly& b) {
        return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const MPoly& a, const MPoly& b) { return !(a == b); }

    /// Exact substitution t_i := args[i] followed by full expansion.
    MPoly compose(const std::vector<MPoly>& args) const {
        if (args.size() != nvars_) throw std::invalid_argument("compose: argument count mismatch");
        const std::uint32_t inner = args.empty() ? 0 : args.front().nvars();
        for (const auto& a : args)
            if (a.nvars() != inner) throw std::invalid_argument("compose: argument dimensions disagree");
        MPoly out(inner);
        for (const auto& [e, c] : terms_) {
            MPoly term = constant(inner, c);
            for (std::uint32_t i = 0; i < nvars_; ++i)
                if (e[i] > 0) term = term * args[i].pow(e[i]);
            out = out + term;
        }
        return out;
    }

    std::string str(const std::string& var = "t") const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            if (!first) os << " + ";
            first = false;
            os << coeff_str(it->second);
            for (std::uint32_t i = 0; i < nvars_; ++i) {
                if (it->first[i] == 0) continue;
                os << "*" << var << (i + 1);
                if (it->first[i] > 1) os << "^" << it->first[i];
            }
        }
        return os.str();
    }

private:
    static void check_dims(const MPoly& a, const MPoly& b) {
        if (a.nvars_ != b.nvars_) throw std::invalid_argument("polynomial dimensions disagree");
    }
    static std::string coeff_str(const Rational& c) { return rational_to_string(c); }
    static std::string coeff_str(const GaussianRational& c) { return "(" + c.str() + ")"; }

    std::uint32_t nvars_ = 0;
    term_map terms_;
};

using RationalPoly = MPoly<Rational>;
using GaussianPoly = MPoly<GaussianRational>;

inline GaussianPoly to_gaussian(const RationalPoly& p) {
    GaussianPoly out(p.nvars());
    for (const auto& [e, c] : p.terms()) out.add_term(e, GaussianRational(c));
    return out;
}

}  // namespace hyperalg
