#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hyperalg/rational.hpp"

namespace hyperalg {

/// Incremental column elimination over an exact field F, with combination
/// tracking.  Columns arrive one at a time as sparse row->value maps; the
/// first column that is linearly dependent on its predecessors yields a
/// kernel vector of the matrix assembled so far.  Row ids and column order
/// are caller-controlled, so the returned vector is deterministic.
template <class F>
class KernelFinder {
public:
    // Returns the kernel coefficients over all columns added so far
    // (including this one, normalized to coefficient 1) when the new column
    // is dependent; std::nullopt when it extends the rank.
    std::optional<std::vector<F>> add_column(std::map<int, F> col) {
        std::vector<F> combo(count_ + 1, F(0));
        combo[count_] = F(1);
        for (const auto& piv : pivots_) {
            const auto hit = col.find(piv.lead);
            if (hit == col.end() || hit->second == F(0)) continue;
            const F factor = hit->second;  // pivots are normalized to lead 1
            for (const auto& [row, v] : piv.column) {
                auto it = col.find(row);
                if (it == col.end()) {
                    col.emplace(row, F(0) - factor * v);
                } else {
                    it->second -= factor * v;
                }
            }
            for (std::size_t j = 0; j < piv.combo.size(); ++j) combo[j] -= factor * piv.combo[j];
        }
        for (auto it = col.begin(); it != col.end();) {
            if (it->second == F(0)) {
                it = col.erase(it);
            } else {
                ++it;
            }
        }
        ++count_;
        if (col.empty()) return combo;

        const int lead = col.begin()->first;  // minimal row id
        const F inv_lead = F(1) / col.begin()->second;
        Pivot piv;
        piv.lead = lead;
        for (auto& [row, v] : col) piv.column.emplace(row, v * inv_lead);
        piv.combo.assign(combo.begin(), combo.end());
        for (auto& c : piv.combo) c *= inv_lead;
        pivots_.push_back(std::move(piv));
        return std::nullopt;
    }

    std::size_t rank() const { return pivots_.size(); }
    std::size_t columns_seen() const { return count_; }

private:
    struct Pivot {
        int lead = 0;
        std::map<int, F> column;  // normalized: column[lead] == 1
        std::vector<F> combo;     // column as combination of original columns
    };
    std::vector<Pivot> pivots_;
    std::size_t count_ = 0;
};

/// Fraction-free (Bareiss) elimination for a square integer system A x = b.
/// Intermediate entries stay integral; the solution is returned exactly as
/// rationals via back substitution.  Throws if A is singular.
inline std::vector<Rational> bareiss_solve(std::vector<std::vector<BigInt>> A,
                                           std::vector<BigInt> b) {
    const std::size_t n = A.size();
    if (n == 0) return {};
    for (const auto& row : A)
        if (row.size() != n) throw std::invalid_argument("bareiss_solve: matrix not square");
    if (b.size() != n) throw std::invalid_argument("bareiss_solve: rhs size mismatch");

    BigInt prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (A[k][k] == 0) {
            std::size_t swap_row = k + 1;
            while (swap_row < n && A[swap_row][k] == 0) ++swap_row;
            if (swap_row == n) throw std::domain_error("bareiss_solve: singular matrix");
            std::swap(A[k], A[swap_row]);
            std::swap(b[k], b[swap_row]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j)
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) / prev;
            b[i] = (b[i] * A[k][k] - A[i][k] * b[k]) / prev;
            A[i][k] = 0;
        }
        prev = A[k][k];
    }
    if (A[n - 1][n - 1] == 0) throw std::domain_error("bareiss_solve: singular matrix");

    std::vector<Rational> x(n);
    for (std::size_t i = n; i-- > 0;) {
        Rational acc(b[i]);
        for (std::size_t j = i + 1; j < n; ++j) acc -= Rational(A[i][j]) * x[j];
        x[i] = acc / Rational(A[i][i]);
    }
    return x;
}

}  // namespace hyperalg
