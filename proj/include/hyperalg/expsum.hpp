#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hyperalg/mpoly.hpp"
#include "hyperalg/multiindex.hpp"
#include "hyperalg/rational.hpp"
#include "hyperalg/symbol.hpp"
#include "hyperalg/util.hpp"

namespace hyperalg {

template <class K>
struct expsum_field;

// Floating field: exponents within 1e-12 (complex modulus) merge, and
// coefficients at or below 1e-300 are pruned.  The constructions only ever
// produce exponents drawn from finite prescribed sample sets, so collisions
// are structural rather than accidental and an absolute tolerance is safe.
template <>
struct expsum_field<cplx> {
    static constexpr double merge_tol = 1e-12;
    static bool exponent_equal(const cplx& a, const cplx& b) { return std::abs(a - b) <= merge_tol; }
    static bool exponent_less(const cplx& a, const cplx& b) { return cplx_lex_less(a, b); }
    static bool prune(const cplx& coeff) { return std::abs(coeff) <= 1e-300; }
};

// Exact field: everything is decided by equality in Q(i).
template <>
struct expsum_field<GaussianRational> {
    static bool exponent_equal(const GaussianRational& a, const GaussianRational& b) { return a == b; }
    static bool exponent_less(const GaussianRational& a, const GaussianRational& b) { return a < b; }
    static bool prune(const GaussianRational& coeff) { return coeff.is_zero(); }
};

/// Finite sum  f(z) = sum_j  a_j * e^{lambda_j z}  with pairwise distinct
/// exponents, kept sorted lexicographically by (Re lambda, Im lambda).  The
/// empty sum is the zero function.  Closed under linear combinations,
/// products, powers and the action of a convolution operator.
template <class K>
class ExpSumT {
public:
    using field = expsum_field<K>;
    struct Term {
        K lambda;
        K coeff;
    };

    ExpSumT() = default;

    static ExpSumT zero() { return {}; }

    static ExpSumT single(K lambda, K coeff) {
        ExpSumT f;
        f.raw_.push_back({std::move(lambda), std::move(coeff)});
        f.normalize();
        return f;
    }

    static ExpSumT one() { return single(K(0), K(1)); }

    static ExpSumT from_terms(std::vector<Term> terms) {
        ExpSumT f;
        f.raw_ = std::move(terms);
        f.normalize();
        return f;
    }

    const std::vector<Term>& terms() const { return raw_; }
    std::size_t size() const { return raw_.size(); }
    bool is_zero() const { return raw_.empty(); }

    friend ExpSumT operator+(const ExpSumT& a, const ExpSumT& b) {
        return linear_combine({{K(1), a}, {K(1), b}});
    }
    friend ExpSumT operator-(const ExpSumT& a, const ExpSumT& b) {
        return linear_combine({{K(1), a}, {K(-1), b}});
    }

    /// Termwise scaled sum with exponent merging and zero pruning.
    static ExpSumT linear_combine(const std::vector<std::pair<K, ExpSumT>>& pairs) {
        ExpSumT out;
        for (const auto& [scalar, f] : pairs)
            for (const auto& t : f.raw_) out.raw_.push_back({t.lambda, scalar * t.coeff});
        out.normalize();
        return out;
    }

    /// Product: exponents add, coefficients multiply, collisions accumulate.
    friend ExpSumT mul(const ExpSumT& a, const ExpSumT& b) {
        ExpSumT out;
        out.raw_.reserve(a.raw_.size() * b.raw_.size());
        for (const auto& ta : a.raw_)
            for (const auto& tb : b.raw_)
                out.raw_.push_back({ta.lambda + tb.lambda, ta.coeff * tb.coeff});
        out.normalize();
        return out;
    }

    ExpSumT pow(std::uint64_t n) const {
        ExpSumT result = one();
        ExpSumT base = *this;
        while (n > 0) {
            if (n & 1u) result = mul(result, base);
            if (n >>= 1u) base = mul(base, base);
        }
        return result;
    }

private:
    void normalize() {
        std::sort(raw_.begin(), raw_.end(), [](const Term& x, const Term& y) {
            return field::exponent_less(x.lambda, y.lambda);
        });
        std::vector<Term> merged;
        merged.reserve(raw_.size());
        for (auto& t : raw_) {
            if (!merged.empty() && field::exponent_equal(merged.back().lambda, t.lambda)) {
                merged.back().coeff += t.coeff;
            } else {
                merged.push_back(std::move(t));
            }
        }
        raw_.clear();
        for (auto& t : merged)
            if (!field::prune(t.coeff)) raw_.push_back(std::move(t));
    }

    std::vector<Term> raw_;
};

using ExpSum = ExpSumT<cplx>;
using ExactExpSum = ExpSumT<GaussianRational>;

/// prod_i f_i^{alpha_i}; the empty product is the constant-one sum.
template <class K>
ExpSumT<K> monomial_power(const std::vector<ExpSumT<K>>& f, const MultiIndex& alpha) {
    if (f.size() != alpha.size())
        throw std::invalid_argument("monomial_power: tuple/multi-index dimension mismatch");
    ExpSumT<K> out = ExpSumT<K>::one();
    for (std::size_t i = 0; i < f.size(); ++i)
        if (alpha[i] > 0) out = mul(out, f[i].pow(alpha[i]));
    return out;
}

namespace detail {
inline cplx to_engine_scalar(const Rational& c, const cplx*) { return cplx(to_double(c), 0.0); }
inline cplx to_engine_scalar(const GaussianRational& c, const cplx*) { return c.to_complex(); }
inline GaussianRational to_engine_scalar(const GaussianRational& c, const GaussianRational*) { return c; }
inline GaussianRational to_engine_scalar(const Rational& c, const GaussianRational*) {
    return GaussianRational(c);
}
}  // namespace detail

/// P(f_1, ..., f_N) expanded as an exponential sum.  When `require_nonunital`
/// is set, polynomials with a constant term are rejected: membership in the
/// non-unital algebra generated by f demands P(0) = 0.
template <class K, class C>
ExpSumT<K> apply_polynomial(const MPoly<C>& P, const std::vector<ExpSumT<K>>& f,
                            bool require_nonunital = true) {
    if (P.nvars() != f.size())
        throw std::invalid_argument("apply_polynomial: variable count mismatch");
    if (require_nonunital && !(P.constant_term() == C(0)))
        throw std::invalid_argument("apply_polynomial: polynomial has a constant term");
    std::vector<std::pair<K, ExpSumT<K>>> pieces;
    pieces.reserve(P.terms().size());
    for (const auto& [alpha, c] : P.terms())
        pieces.emplace_back(detail::to_engine_scalar(c, static_cast<const K*>(nullptr)),
                            monomial_power(f, alpha));
    return ExpSumT<K>::linear_combine(pieces);
}

/// The n-th iterate of the convolution operator with symbol Phi, acting
/// through the eigenvalue identity: a e^{lambda z} -> a Phi(lambda)^n e^{lambda z}.
inline ExpSum apply_operator(const Symbol& phi, const ExpSum& f, unsigned n) {
    std::vector<ExpSum::Term> terms;
    terms.reserve(f.size());
    for (const auto& t : f.terms())
        terms.push_back({t.lambda, t.coeff * cpow_int(phi.eval(t.lambda), n)});
    return ExpSum::from_terms(std::move(terms));
}

inline cplx eval_point(const ExpSum& f, const cplx& z) {
    cplx acc(0.0, 0.0);
    for (const auto& t : f.terms()) acc += t.coeff * std::exp(t.lambda * z);
    return acc;
}

struct SupGrid {
    int n_radial = 24;
    int n_angular = 96;
};

/// Max of |f - g| over the polar sample grid of the closed disc |z| <= R.
/// A lower bound for the true sup; the grid includes rho = R and theta = 0.
inline double sup_distance(const ExpSum& f, const ExpSum& g, double R, SupGrid grid = {}) {
    if (!(R > 0.0)) throw std::invalid_argument("sup_distance: radius must be positive");
    if (grid.n_radial < 1 || grid.n_angular < 1)
        throw std::invalid_argument("sup_distance: grid dimensions must be >= 1");
    const ExpSum diff = f - g;
    if (diff.is_zero()) return 0.0;
    const std::size_t total = static_cast<std::size_t>(grid.n_radial + 1) * grid.n_angular;
    return parallel_reduce<double>(
        total, 0.0,
        [&](std::size_t idx) {
            const int j = static_cast<int>(idx) / grid.n_angular;
            const int m = static_cast<int>(idx) % grid.n_angular;
            const double rho = R * static_cast<double>(j) / grid.n_radial;
            const double theta = 2.0 * M_PI * static_cast<double>(m) / grid.n_angular;
            return std::abs(eval_point(diff, std::polar(rho, theta)));
        },
        [](double a, double b) { return std::max(a, b); });
}

/// Taylor coefficients (c_0, ..., c_K) of f about the origin:
/// c_m = sum_j a_j lambda_j^m / m!.
inline std::vector<cplx> taylor_truncate(const ExpSum& f, unsigned K) {
    std::vector<cplx> out(K + 1, cplx(0.0, 0.0));
    for (const auto& t : f.terms()) {
        cplx pow_over_fact(1.0, 0.0);  // lambda^m / m!
        for (unsigned m = 0; m <= K; ++m) {
            out[m] += t.coeff * pow_over_fact;
            pow_over_fact *= t.lambda / static_cast<double>(m + 1);
        }
    }
    return out;
}

/// Structural near-equality: same exponent sets (up to merge tolerance) and
/// coefficients within `tol` relative.
inline bool approx_equal(const ExpSum& a, const ExpSum& b, double tol = 1e-9) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!expsum_field<cplx>::exponent_equal(a.terms()[i].lambda, b.terms()[i].lambda)) return false;
        if (!approx_eq(a.terms()[i].coeff, b.terms()[i].coeff, tol)) return false;
    }
    return true;
}

inline ExpSum to_floating(const ExactExpSum& f) {
    std::vector<ExpSum::Term> terms;
    terms.reserve(f.size());
    for (const auto& t : f.terms()) terms.push_back({t.lambda.to_complex(), t.coeff.to_complex()});
    return ExpSum::from_terms(std::move(terms));
}

}  // namespace hyperalg
