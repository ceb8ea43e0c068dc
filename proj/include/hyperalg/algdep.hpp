#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hyperalg/expsum.hpp"
#include "hyperalg/linalg.hpp"
#include "hyperalg/modular.hpp"
#include "hyperalg/mpoly.hpp"
#include "hyperalg/multiindex.hpp"
#include "hyperalg/rational.hpp"

namespace hyperalg {

/// Thrown when a guaranteed relation is requested for N <= k polynomials.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Exact substitution R(P_1, ..., P_N), fully expanded.  The zero result is
/// the certificate that R annihilates the tuple.
template <class C>
MPoly<C> expand_compose(const MPoly<C>& R, const std::vector<MPoly<C>>& P) {
    return R.compose(P);
}

struct RelationResult {
    RationalPoly relation;    // R != 0, R(0) = 0, R(P) == 0 exactly
    std::uint64_t q = 0;      // chosen pigeonhole bound
    std::uint64_t max_degree = 0;  // d = max deg P_i
};

namespace detail {

// smallest positive integer q with q^N > (N d q + 1)^k, decided in exact
// integer arithmetic
inline std::uint64_t pigeonhole_q(std::uint64_t N, std::uint64_t k, std::uint64_t d) {
    for (std::uint64_t q = 1;; ++q) {
        BigInt lhs = boost::multiprecision::pow(BigInt(q), static_cast<unsigned>(N));
        BigInt rhs = boost::multiprecision::pow(BigInt(N * d * q + 1), static_cast<unsigned>(k));
        if (lhs > rhs) return q;
        if (q > (1u << 20)) throw std::logic_error("pigeonhole_q: no feasible q found");
    }
}

using FpPoly = std::map<MultiIndex, std::uint64_t, GrlexLess>;

inline std::optional<FpPoly> poly_mod(const RationalPoly& p, std::uint64_t prime) {
    FpPoly out;
    for (const auto& [e, c] : p.terms()) {
        const auto r = modular::reduce(c, prime);
        if (!r) return std::nullopt;  // denominator vanishes mod prime
        if (*r != 0) out.emplace(e, *r);
    }
    return out;
}

inline FpPoly fp_mul(const FpPoly& a, const FpPoly& b, std::uint64_t p) {
    FpPoly out;
    for (const auto& [ea, ca] : a) {
        for (const auto& [eb, cb] : b) {
            MultiIndex e(ea.size());
            for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            const std::uint64_t prod = modular::mulmod(ca, cb, p);
            auto it = out.find(e);
            if (it == out.end()) {
                if (prod != 0) out.emplace(std::move(e), prod);
            } else {
                it->second = modular::addmod(it->second, prod, p);
                if (it->second == 0) out.erase(it);
            }
        }
    }
    return out;
}

inline FpPoly fp_pow(const FpPoly& base_in, std::uint64_t n, std::uint64_t p, std::uint32_t k) {
    FpPoly result;
    result.emplace(MultiIndex(k, 0), 1 % p);
    FpPoly base = base_in;
    while (n > 0) {
        if (n & 1u) result = fp_mul(result, base, p);
        if (n >>= 1u) base = fp_mul(base, base, p);
    }
    return result;
}

// Dense incremental echelon over F_p; pivots are normalized to lead 1 and
// stored densely.  Rows are discovered lazily через the caller's row map.
class FpEchelon {
public:
    explicit FpEchelon(std::uint64_t p) : p_(p) {}

    // Reduces `col` in place; returns true when it is dependent on the
    // pivots inserted so far (reduced to zero), false after inserting it as
    // a new pivot.
    bool reduce_and_insert(std::vector<std::uint64_t>& col) {
        for (const auto& piv : pivots_) {
            if (piv.lead >= col.size()) continue;
            const std::uint64_t f = col[piv.lead];
            if (f == 0) continue;
            const std::size_t upto = std::min(col.size(), piv.values.size());
            for (std::size_t r = 0; r < upto; ++r) {
                if (piv.values[r] != 0)
                    col[r] = modular::submod(col[r], modular::mulmod(f, piv.values[r], p_), p_);
            }
        }
        std::size_t lead = col.size();
        for (std::size_t r = 0; r < col.size(); ++r) {
            if (col[r] != 0) {
                lead = r;
                break;
            }
        }
        if (lead == col.size()) return true;
        Pivot piv;
        piv.lead = lead;
        piv.values = col;
        const std::uint64_t inv = modular::invmod(col[lead], p_);
        for (auto& v : piv.values) v = modular::mulmod(v, inv, p_);
        pivots_.push_back(std::move(piv));
        return false;
    }

    std::size_t rank() const { return pivots_.size(); }
    std::size_t pivot_lead(std::size_t i) const { return pivots_[i].lead; }

private:
    struct Pivot {
        std::size_t lead = 0;
        std::vector<std::uint64_t> values;
    };
    std::uint64_t p_;
    std::vector<Pivot> pivots_;
};

struct Pass1Result {
    MultiIndex dependent_alpha;            // first column dependent on its predecessors
    std::vector<MultiIndex> pivot_alphas;  // columns that became pivots, in order
    std::vector<MultiIndex> lead_monomials;  // row (monomial) of each pivot's lead
};

// Enumerates alpha in graded order (degree ascending, first coordinate
// varying slowest within a degree), with |alpha|_inf <= q, expanding
// prod P_i^{alpha_i} mod `prime` level by level, until the first linearly
// dependent column appears.  The pigeonhole bound guarantees termination.
inline std::optional<Pass1Result> relation_pass1(const std::vector<RationalPoly>& P,
                                                 std::uint64_t q, std::uint64_t prime) {
    const std::uint32_t N = static_cast<std::uint32_t>(P.size());
    const std::uint32_t k = P.front().nvars();

    std::vector<FpPoly> P_mod;
    for (const auto& p : P) {
        auto r = poly_mod(p, prime);
        if (!r || r->empty()) return std::nullopt;  // unlucky prime
        P_mod.push_back(std::move(*r));
    }

    std::map<MultiIndex, int, GrlexLess> row_ids;  // monomial -> row, discovery order
    std::vector<MultiIndex> row_monomials;
    const auto row_of = [&](const MultiIndex& mono) {
        const auto it = row_ids.find(mono);
        if (it != row_ids.end()) return it->second;
        const int id = static_cast<int>(row_monomials.size());
        row_ids.emplace(mono, id);
        row_monomials.push_back(mono);
        return id;
    };

    FpEchelon echelon(prime);
    Pass1Result result;

    std::map<MultiIndex, FpPoly, GrlexLess> prev_level;  // degree D-1 products
    prev_level.emplace(MultiIndex(N, 0), FpPoly{{MultiIndex(k, 0), 1}});

    const std::uint64_t max_total_degree = static_cast<std::uint64_t>(N) * q;
    for (std::uint64_t D = 1; D <= max_total_degree; ++D) {
        std::map<MultiIndex, FpPoly, GrlexLess> level;
        std::vector<MultiIndex> order;
        enumerate_degree(N, static_cast<std::uint32_t>(D), static_cast<std::uint32_t>(q),
                         [&](const MultiIndex& alpha) { order.push_back(alpha); });
        for (const MultiIndex& alpha : order) {
            std::uint32_t j = 0;
            while (alpha[j] == 0) ++j;
            MultiIndex parent = alpha;
            --parent[j];
            const auto pit = prev_level.find(parent);
            if (pit == prev_level.end()) throw std::logic_error("relation_pass1: missing DP parent");
            FpPoly prod = fp_mul(pit->second, P_mod[j], prime);

            std::vector<std::uint64_t> col(row_monomials.size(), 0);
            for (const auto& [mono, v] : prod) {
                const std::size_t r = static_cast<std::size_t>(row_of(mono));
                if (r >= col.size()) col.resize(row_monomials.size(), 0);
                col[r] = v;
            }
            level.emplace(alpha, std::move(prod));

            if (echelon.reduce_and_insert(col)) {
                result.dependent_alpha = alpha;
                for (std::size_t i = 0; i < echelon.rank(); ++i)
                    result.lead_monomials.push_back(row_monomials[echelon.pivot_lead(i)]);
                return result;
            }
            result.pivot_alphas.push_back(alpha);
        }
        prev_level = std::move(level);
    }
    throw std::logic_error("relation_pass1: exhausted enumeration without dependency");
}

// prod P_i^{alpha_i} mod p, direct (used for the solve phase where only the
// pivot columns are needed).
inline FpPoly fp_product(const std::vector<FpPoly>& P_mod, const MultiIndex& alpha,
                         std::uint64_t p, std::uint32_t k) {
    FpPoly acc;
    acc.emplace(MultiIndex(k, 0), 1 % p);
    for (std::size_t i = 0; i < P_mod.size(); ++i)
        if (alpha[i] > 0) acc = fp_mul(acc, fp_pow(P_mod[i], alpha[i], p, k), p);
    return acc;
}

// Exact product over Q (small cases and certificates).
inline RationalPoly exact_product(const std::vector<RationalPoly>& P, const MultiIndex& alpha) {
    RationalPoly acc = RationalPoly::constant(P.front().nvars(), Rational(1));
    for (std::size_t i = 0; i < P.size(); ++i)
        if (alpha[i] > 0) acc = acc * P[i].pow(alpha[i]);
    return acc;
}

// Solve sum_j x_j col(pivot_j) = -col(dependent) restricted to the pivot
// lead rows, exactly, via column-scaled Bareiss elimination.
inline std::vector<Rational> solve_exact(const std::vector<RationalPoly>& P,
                                         const Pass1Result& pass1) {
    const std::size_t n = pass1.pivot_alphas.size();
    std::vector<std::vector<Rational>> cols(n);
    std::vector<Rational> rhs_col(n);
    for (std::size_t j = 0; j < n; ++j) {
        const RationalPoly prod = exact_product(P, pass1.pivot_alphas[j]);
        cols[j].resize(n);
        for (std::size_t i = 0; i < n; ++i) cols[j][i] = prod.coeff(pass1.lead_monomials[i]);
    }
    {
        const RationalPoly prod = exact_product(P, pass1.dependent_alpha);
        for (std::size_t i = 0; i < n; ++i) rhs_col[i] = prod.coeff(pass1.lead_monomials[i]);
    }

    // scale each column (and the rhs) to integers
    std::vector<BigInt> col_scale(n, 1);
    std::vector<std::vector<BigInt>> A(n, std::vector<BigInt>(n));
    for (std::size_t j = 0; j < n; ++j) {
        BigInt lcm = 1;
        for (std::size_t i = 0; i < n; ++i) lcm = boost::multiprecision::lcm(lcm, denominator(cols[j][i]));
        col_scale[j] = lcm;
        for (std::size_t i = 0; i < n; ++i) {
            const Rational v = cols[j][i] * Rational(lcm);
            A[i][j] = numerator(v);
        }
    }
    BigInt rhs_scale = 1;
    for (std::size_t i = 0; i < n; ++i)
        rhs_scale = boost::multiprecision::lcm(rhs_scale, denominator(rhs_col[i]));
    std::vector<BigInt> b(n);
    for (std::size_t i = 0; i < n; ++i) b[i] = numerator(rhs_col[i] * Rational(rhs_scale)) * BigInt(-1);

    std::vector<Rational> y = bareiss_solve(std::move(A), std::move(b));
    // undo the scalings: x_j = y_j * col_scale_j / rhs_scale
    for (std::size_t j = 0; j < n; ++j) y[j] = y[j] * Rational(col_scale[j]) / Rational(rhs_scale);
    return y;
}

inline RationalPoly assemble_relation(const Pass1Result& pass1, const std::vector<Rational>& x,
                                      std::uint32_t N);

// Multi-modular solve of the same square system with CRT combination and
// balanced rational reconstruction.  Candidates are verified by exact
// expansion before being accepted, so a short modulus or an unlucky prime
// only costs more iterations, never correctness.
inline std::optional<RationalPoly> solve_modular(const std::vector<RationalPoly>& P,
                                                 const Pass1Result& pass1,
                                                 modular::PrimeStream& primes, std::uint32_t N) {
    const std::size_t n = pass1.pivot_alphas.size();
    const std::uint32_t k = P.front().nvars();
    std::vector<modular::CrtAccumulator> acc(n);
    std::vector<Rational> candidate(n);
    int bad_primes = 0;
    int since_last_try = 0;
    int next_try = 4;
    int primes_used = 0;

    while (primes_used < 8192) {
        const std::uint64_t p = primes.next();
        std::vector<FpPoly> P_mod;
        bool ok = true;
        for (const auto& poly : P) {
            auto r = poly_mod(poly, p);
            if (!r || r->empty()) {
                ok = false;
                break;
            }
            P_mod.push_back(std::move(*r));
        }
        if (!ok) {
            if (++bad_primes > 64) return std::nullopt;
            continue;
        }

        // assemble the square system mod p, columns = pivots, rhs = -dependent
        std::vector<std::vector<std::uint64_t>> M(n, std::vector<std::uint64_t>(n + 1, 0));
        for (std::size_t j = 0; j < n; ++j) {
            const FpPoly prod = fp_product(P_mod, pass1.pivot_alphas[j], p, k);
            for (std::size_t i = 0; i < n; ++i) {
                const auto it = prod.find(pass1.lead_monomials[i]);
                if (it != prod.end()) M[i][j] = it->second;
            }
        }
        {
            const FpPoly prod = fp_product(P_mod, pass1.dependent_alpha, p, k);
            for (std::size_t i = 0; i < n; ++i) {
                const auto it = prod.find(pass1.lead_monomials[i]);
                if (it != prod.end()) M[i][n] = it->second == 0 ? 0 : p - it->second;
            }
        }

        bool singular = false;
        for (std::size_t c = 0; c < n; ++c) {
            std::size_t piv = c;
            while (piv < n && M[piv][c] == 0) ++piv;
            if (piv == n) {
                singular = true;
                break;
            }
            std::swap(M[c], M[piv]);
            const std::uint64_t inv = modular::invmod(M[c][c], p);
            for (std::size_t j = c; j <= n; ++j) M[c][j] = modular::mulmod(M[c][j], inv, p);
            for (std::size_t r = 0; r < n; ++r) {
                if (r == c || M[r][c] == 0) continue;
                const std::uint64_t f = M[r][c];
                for (std::size_t j = c; j <= n; ++j)
                    M[r][j] = modular::submod(M[r][j], modular::mulmod(f, M[c][j], p), p);
            }
        }
        if (singular) {
            if (++bad_primes > 64) return std::nullopt;
            continue;
        }

        ++primes_used;
        for (std::size_t i = 0; i < n; ++i) acc[i].add(M[i][n], p);

        if (++since_last_try >= next_try) {
            since_last_try = 0;
            next_try = std::min(next_try * 2, 64);
            bool all = true;
            for (std::size_t i = 0; i < n && all; ++i) {
                const auto r = modular::rational_reconstruct(acc[i].value, acc[i].modulus);
                if (!r) {
                    all = false;
                } else {
                    candidate[i] = *r;
                }
            }
            if (all) {
                RationalPoly R = assemble_relation(pass1, candidate, N);
                if (!R.is_zero() && R.constant_term() == Rational(0) &&
                    expand_compose(R, P).is_zero())
                    return R;
            }
        }
    }
    return std::nullopt;
}

inline RationalPoly assemble_relation(const Pass1Result& pass1, const std::vector<Rational>& x,
                                      std::uint32_t N) {
    // integer-primitive normalization with positive coefficient on the
    // dependent monomial
    BigInt lcm = 1;
    for (const auto& v : x) lcm = boost::multiprecision::lcm(lcm, denominator(v));
    std::vector<BigInt> ints;
    ints.reserve(x.size() + 1);
    for (const auto& v : x) ints.push_back(numerator(v * Rational(lcm)));
    ints.push_back(lcm);  // coefficient of the dependent column
    BigInt g = 0;
    for (const auto& v : ints) g = boost::multiprecision::gcd(g, v);
    if (g == 0) g = 1;

    RationalPoly R(N);
    for (std::size_t j = 0; j < pass1.pivot_alphas.size(); ++j)
        R.add_term(pass1.pivot_alphas[j], Rational(ints[j] / g));
    R.add_term(pass1.dependent_alpha, Rational(ints.back() / g));
    return R;
}

}  // namespace detail

/// Produces a nonzero polynomial R with R(0) = 0 and R(P_1, ..., P_N) = 0
/// exactly, for N polynomials in k < N variables.  Columns (the candidate
/// monomials in the P_i) are scanned in graded order and the first dependent
/// one determines R, so the output is deterministic.  The result is
/// certified internally by exact expansion before being returned.
inline RelationResult find_relation(const std::vector<RationalPoly>& P) {
    if (P.empty()) throw std::invalid_argument("find_relation: empty input");
    const std::uint32_t k = P.front().nvars();
    const std::uint32_t N = static_cast<std::uint32_t>(P.size());
    if (k < 1) throw std::invalid_argument("find_relation: polynomials must have >= 1 variable");
    for (const auto& p : P) {
        if (p.nvars() != k) throw std::invalid_argument("find_relation: variable counts disagree");
        if (p.is_zero()) throw std::invalid_argument("find_relation: zero polynomial in input");
    }
    if (N <= k)
        throw DimensionError("find_relation: need more polynomials than variables (N > k)");

    RelationResult out;
    out.max_degree = 0;
    for (const auto& p : P) out.max_degree = std::max(out.max_degree, p.degree());
    out.q = detail::pigeonhole_q(N, k, out.max_degree);

    modular::PrimeStream pass1_primes;
    for (int attempt = 0; attempt < 8; ++attempt) {
        const std::uint64_t p1 = pass1_primes.next();
        auto pass1 = detail::relation_pass1(P, out.q, p1);
        if (!pass1) continue;

        if (pass1->pivot_alphas.size() <= 48) {
            const std::vector<Rational> x = detail::solve_exact(P, *pass1);
            RationalPoly R = detail::assemble_relation(*pass1, x, N);
            if (R.is_zero() || !(R.constant_term() == Rational(0))) continue;
            if (!expand_compose(R, P).is_zero()) continue;  // false dependency mod p1; retry
            out.relation = std::move(R);
            return out;
        }

        modular::PrimeStream solve_primes((1ull << 62) + (1ull << 20) + 1 + 2048 * attempt);
        auto R = detail::solve_modular(P, *pass1, solve_primes, N);
        if (!R) continue;
        out.relation = std::move(*R);
        return out;
    }
    throw std::logic_error("find_relation: could not certify a relation (exhausted retries)");
}

/// Bounded-degree algebraic dependence test for tuples of exact exponential
/// sums.  Expands R(f) for an unknown R supported on 1 <= |alpha|_1 <= m,
/// groups by exact exponent, and returns the first kernel vector of the
/// resulting linear system as a polynomial relation, or nullopt when the
/// system has full column rank (independence up to degree m in the
/// non-unital sense).  With `allow_unital`, the constant monomial joins the
/// candidate support.
inline std::optional<GaussianPoly> dependence_upto(const std::vector<ExactExpSum>& f,
                                                   std::uint32_t m, bool allow_unital = false) {
    if (f.empty()) throw std::invalid_argument("dependence_upto: empty tuple");
    if (m < 1) throw std::invalid_argument("dependence_upto: degree bound must be >= 1");
    const std::uint32_t N = static_cast<std::uint32_t>(f.size());

    std::map<GaussianRational, int> row_ids;
    const auto row_of = [&](const GaussianRational& lambda) {
        const auto it = row_ids.find(lambda);
        if (it != row_ids.end()) return it->second;
        const int id = static_cast<int>(row_ids.size());
        row_ids.emplace(lambda, id);
        return id;
    };

    KernelFinder<GaussianRational> kernel;
    std::vector<MultiIndex> columns;
    std::optional<std::vector<GaussianRational>> combo;

    std::vector<MultiIndex> order;
    if (allow_unital) order.push_back(MultiIndex(N, 0));
    for (std::uint32_t D = 1; D <= m; ++D)
        enumerate_degree(N, D, D, [&](const MultiIndex& alpha) { order.push_back(alpha); });

    for (const MultiIndex& alpha : order) {
        const ExactExpSum g = monomial_power(f, alpha);
        std::map<int, GaussianRational> col;
        for (const auto& t : g.terms()) col.emplace(row_of(t.lambda), t.coeff);
        columns.push_back(alpha);
        combo = kernel.add_column(std::move(col));
        if (combo) break;
    }
    if (!combo) return std::nullopt;

    GaussianPoly R(N);
    for (std::size_t j = 0; j < combo->size(); ++j) R.add_term(columns[j], (*combo)[j]);

    // scale to a Gaussian-integer primitive form, dependent coefficient kept
    // positive (real part, then imaginary)
    BigInt lcm = 1;
    for (const auto& [e, c] : R.terms()) {
        lcm = boost::multiprecision::lcm(lcm, denominator(c.re));
        lcm = boost::multiprecision::lcm(lcm, denominator(c.im));
    }
    BigInt g = 0;
    for (const auto& [e, c] : R.terms()) {
        g = boost::multiprecision::gcd(g, numerator(c.re * Rational(lcm)));
        g = boost::multiprecision::gcd(g, numerator(c.im * Rational(lcm)));
    }
    if (g == 0) g = 1;
    GaussianPoly scaled(N);
    for (const auto& [e, c] : R.terms())
        scaled.add_term(e, GaussianRational(c.re * Rational(lcm) / Rational(g),
                                            c.im * Rational(lcm) / Rational(g)));

    if (!apply_polynomial(scaled, f).is_zero())
        throw std::logic_error("dependence_upto: relation failed exact self-certification");
    return scaled;
}

}  // namespace hyperalg
