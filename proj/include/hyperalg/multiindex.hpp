#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "hyperalg/rational.hpp"

namespace hyperalg {

using MultiIndex = std::vector<std::uint32_t>;

inline std::uint64_t l1_norm(const MultiIndex& a) {
    return std::accumulate(a.begin(), a.end(), std::uint64_t(0));
}

inline std::uint32_t linf_norm(const MultiIndex& a) {
    return a.empty() ? 0u : *std::max_element(a.begin(), a.end());
}

inline bool is_zero_index(const MultiIndex& a) {
    return std::all_of(a.begin(), a.end(), [](std::uint32_t v) { return v == 0; });
}

// Graded order: total degree first, then plain lexicographic on the tuple.
// This is the canonical column/term order used by every nullspace routine.
inline bool grlex_less(const MultiIndex& a, const MultiIndex& b) {
    const auto da = l1_norm(a), db = l1_norm(b);
    if (da != db) return da < db;
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

struct GrlexLess {
    bool operator()(const MultiIndex& a, const MultiIndex& b) const { return grlex_less(a, b); }
};

// All multi-indices of dimension n with |a|_1 == degree, in descending
// lexicographic order (first coordinate largest first), optionally capped
// coordinatewise.
inline void enumerate_degree(std::uint32_t n, std::uint32_t degree, std::uint32_t linf_cap,
                             const std::function<void(const MultiIndex&)>& visit) {
    MultiIndex current(n, 0);
    const std::function<void(std::uint32_t, std::uint32_t)> rec = [&](std::uint32_t pos,
                                                                      std::uint32_t remaining) {
        if (pos + 1 == n) {
            if (remaining <= linf_cap) {
                current[pos] = remaining;
                visit(current);
            }
            return;
        }
        const std::uint32_t top = std::min(remaining, linf_cap);
        for (std::uint32_t v = top + 1; v-- > 0;) {
            current[pos] = v;
            rec(pos + 1, remaining - v);
        }
        current[pos] = 0;
    };
    if (n == 0) return;
    rec(0, degree);
}

/// A finite set A of nonzero multi-indices together with the derived data the
/// orbit construction needs: the sup-norm maximum M_A, the distinguished
/// coordinate i_A, the degree bound d_A, an injective weight vector k and the
/// minimizing index beta.
struct MultiIndexSet {
    std::uint32_t dimension = 0;
    std::vector<MultiIndex> indices;       // sorted grlex, no duplicates, no zero tuple
    std::vector<Rational> weights;         // k, positive, injective on indices
    MultiIndex beta;
    std::uint32_t max_linf = 0;            // M_A
    std::uint32_t distinguished_coord = 0; // i_A, zero-based
    std::uint64_t max_l1 = 0;              // d_A
};

inline Rational weight_value(const std::vector<Rational>& k, const MultiIndex& a) {
    Rational acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += k[i] * a[i];
    return acc;
}

inline void validate_index_set(const std::vector<MultiIndex>& indices) {
    if (indices.empty()) throw std::invalid_argument("multi-index set must be non-empty");
    const std::size_t n = indices.front().size();
    if (n == 0) throw std::invalid_argument("multi-index dimension must be positive");
    for (const auto& a : indices) {
        if (a.size() != n) throw std::invalid_argument("multi-index dimensions disagree");
        if (is_zero_index(a)) throw std::invalid_argument("multi-index set must not contain the zero tuple");
    }
}

/// Rejection-samples a positive rational weight vector k with denominator
/// 2^16 and entries in [1, 2] until the functional a -> sum k_i a_i is
/// injective on A.  Injectivity is decided exactly over the rationals.  A
/// collision confines k to finitely many hyperplanes, so the expected number
/// of retries is O(1); running out of retries indicates a bug.
inline std::vector<Rational> find_injective_weights(const std::vector<MultiIndex>& indices,
                                                    std::uint64_t rng_seed) {
    validate_index_set(indices);
    const std::size_t n = indices.front().size();
    std::mt19937_64 rng(rng_seed);
    constexpr std::uint64_t kDen = 1u << 16;
    constexpr int kMaxDraws = 1000;
    for (int attempt = 0; attempt < kMaxDraws; ++attempt) {
        std::vector<Rational> k(n);
        for (std::size_t i = 0; i < n; ++i) {
            const std::uint64_t num = kDen + (rng() % (kDen + 1));  // [2^16, 2^17] -> [1, 2]
            k[i] = Rational(BigInt(num), BigInt(kDen));
        }
        std::vector<Rational> values;
        values.reserve(indices.size());
        for (const auto& a : indices) values.push_back(weight_value(k, a));
        std::sort(values.begin(), values.end());
        if (std::adjacent_find(values.begin(), values.end()) == values.end()) return k;
    }
    throw std::runtime_error("find_injective_weights: retry limit exceeded (1000 draws)");
}

struct BetaSelection {
    MultiIndex beta;
    std::uint32_t max_linf = 0;
    std::uint32_t distinguished_coord = 0;
    std::uint64_t max_l1 = 0;
};

/// Picks beta as the weight-minimal element among those indices whose
/// distinguished coordinate attains M_A, and verifies the strict inequality
/// sum_{i != i_A} k_i (beta_i - alpha_i) < 0 for every other candidate.
inline BetaSelection select_beta(const std::vector<MultiIndex>& indices,
                                 const std::vector<Rational>& k) {
    validate_index_set(indices);
    const std::size_t n = indices.front().size();
    if (k.size() != n) throw std::invalid_argument("weight dimension mismatch");

    {
        std::vector<Rational> values;
        values.reserve(indices.size());
        for (const auto& a : indices) values.push_back(weight_value(k, a));
        std::sort(values.begin(), values.end());
        if (std::adjacent_find(values.begin(), values.end()) != values.end())
            throw std::invalid_argument("select_beta: weights are not injective on A");
    }

    BetaSelection out;
    for (const auto& a : indices) {
        out.max_linf = std::max(out.max_linf, linf_norm(a));
        out.max_l1 = std::max(out.max_l1, l1_norm(a));
    }
    out.distinguished_coord = 0;
    bool found = false;
    for (std::uint32_t j = 0; j < n && !found; ++j) {
        for (const auto& a : indices) {
            if (a[j] == out.max_linf) {
                out.distinguished_coord = j;
                found = true;
                break;
            }
        }
    }

    bool have = false;
    Rational best;
    for (const auto& a : indices) {
        if (a[out.distinguished_coord] != out.max_linf) continue;
        const Rational v = weight_value(k, a);
        if (!have || v < best) {
            best = v;
            out.beta = a;
            have = true;
        }
    }

    // strict minimality off the distinguished coordinate, exact arithmetic
    for (const auto& a : indices) {
        if (a[out.distinguished_coord] != out.max_linf || a == out.beta) continue;
        Rational s = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == out.distinguished_coord) continue;
            s += k[i] * (Rational(out.beta[i]) - Rational(a[i]));
        }
        if (!(s < 0))
            throw std::logic_error("select_beta: strict minimality inequality failed");
    }
    return out;
}

inline MultiIndexSet make_index_set(std::vector<MultiIndex> indices, std::uint64_t rng_seed) {
    validate_index_set(indices);
    std::sort(indices.begin(), indices.end(), GrlexLess{});
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());

    MultiIndexSet set;
    set.dimension = static_cast<std::uint32_t>(indices.front().size());
    set.indices = std::move(indices);
    set.weights = find_injective_weights(set.indices, rng_seed);
    const BetaSelection sel = select_beta(set.indices, set.weights);
    set.beta = sel.beta;
    set.max_linf = sel.max_linf;
    set.distinguished_coord = sel.distinguished_coord;
    set.max_l1 = sel.max_l1;
    return set;
}

}  // namespace hyperalg
