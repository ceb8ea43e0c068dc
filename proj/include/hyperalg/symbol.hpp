#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperalg/util.hpp"

namespace hyperalg {

/// An entire function of exponential type used as the multiplier of a
/// convolution operator.  Supported shapes: polynomials with complex
/// coefficients and the a*z compositions of exp, sin, cos.  Every shape
/// evaluates in closed form; there is no series truncation anywhere.
class Symbol {
public:
    enum class Kind { poly, exp, sin, cos };

    static Symbol polynomial(std::vector<cplx> coeffs) {
        // trim trailing (numerically exact) zeros so degree queries are honest
        while (coeffs.size() > 1 && coeffs.back() == cplx(0.0, 0.0)) coeffs.pop_back();
        if (coeffs.empty()) coeffs.push_back(cplx(0.0, 0.0));
        Symbol s;
        s.kind_ = Kind::poly;
        s.coeffs_ = std::move(coeffs);
        return s;
    }
    static Symbol identity() { return polynomial({cplx(0, 0), cplx(1, 0)}); }
    static Symbol exponential(cplx a) { return builtin(Kind::exp, a); }
    static Symbol sine(cplx a) { return builtin(Kind::sin, a); }
    static Symbol cosine(cplx a) { return builtin(Kind::cos, a); }

    Kind kind() const { return kind_; }
    const std::vector<cplx>& coeffs() const { return coeffs_; }
    cplx scale() const { return scale_; }

    cplx operator()(const cplx& z) const { return eval(z); }

    cplx eval(const cplx& z) const {
        switch (kind_) {
            case Kind::poly: {
                cplx acc(0.0, 0.0);
                for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
                return acc;
            }
            case Kind::exp:
                return std::exp(scale_ * z);
            case Kind::sin:
                return std::sin(scale_ * z);
            case Kind::cos:
                return std::cos(scale_ * z);
        }
        throw std::logic_error("unreachable symbol kind");
    }

    bool nonconstant() const {
        if (kind_ == Kind::poly) return coeffs_.size() > 1;
        return scale_ != cplx(0.0, 0.0);  // exp(0z), sin(0z), cos(0z) are constants
    }

    int degree() const { return kind_ == Kind::poly ? static_cast<int>(coeffs_.size()) - 1 : -1; }

    // The symbol z -> Phi(a*z).  All supported kinds are closed under this
    // precomposition, which implements the orientation normalization used by
    // the geometric construction.
    Symbol precompose_scale(const cplx& a) const {
        switch (kind_) {
            case Kind::poly: {
                std::vector<cplx> c = coeffs_;
                cplx p(1.0, 0.0);
                for (std::size_t k = 1; k < c.size(); ++k) {
                    p *= a;
                    c[k] *= p;
                }
                return polynomial(std::move(c));
            }
            case Kind::exp:
                return exponential(scale_ * a);
            case Kind::sin:
                return sine(scale_ * a);
            case Kind::cos:
                return cosine(scale_ * a);
        }
        throw std::logic_error("unreachable symbol kind");
    }

    std::string describe() const {
        switch (kind_) {
            case Kind::poly: {
                std::string s = "poly(";
                for (std::size_t i = 0; i < coeffs_.size(); ++i) {
                    if (i) s += ", ";
                    s += std::to_string(coeffs_[i].real());
                    if (coeffs_[i].imag() != 0.0) s += "+" + std::to_string(coeffs_[i].imag()) + "i";
                }
                return s + ")";
            }
            case Kind::exp:
                return "exp(a z)";
            case Kind::sin:
                return "sin(a z)";
            case Kind::cos:
                return "cos(a z)";
        }
        return {};
    }

private:
    static Symbol builtin(Kind k, cplx a) {
        Symbol s;
        s.kind_ = k;
        s.scale_ = a;
        return s;
    }

    Kind kind_ = Kind::poly;
    std::vector<cplx> coeffs_{cplx(0.0, 0.0)};  // poly only
    cplx scale_{1.0, 0.0};                       // builtins only
};

inline cplx eval_symbol(const Symbol& phi, const cplx& lambda) { return phi.eval(lambda); }

/// |Phi(z)| < r, i.e. membership of z in the preimage of the open disc of
/// radius r.
inline bool in_open_disc_preimage(const Symbol& phi, const cplx& z, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("disc radius must be positive");
    return std::abs(phi.eval(z)) < r;
}

struct HypothesisReport {
    bool origin_ok = false;   // |Phi(0)| < 1
    bool nonconstant = false;
};

/// Reports the operator-level hypotheses that are decidable pointwise.  The
/// caller decides how to proceed; a failing origin test can still be rescued
/// by the relaxed triangle condition checked in the geometry module.
inline HypothesisReport validate_hypotheses(const Symbol& phi) {
    HypothesisReport rep;
    rep.origin_ok = std::abs(phi.eval(cplx(0.0, 0.0))) < 1.0;
    rep.nonconstant = phi.nonconstant();
    return rep;
}

}  // namespace hyperalg
