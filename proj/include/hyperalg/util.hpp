#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace hyperalg {

using cplx = std::complex<double>;

// Integer power by repeated squaring. Used everywhere a deterministic,
// reproducible power of a complex value is needed (std::pow(complex, double)
// goes through exp/log and is not bit-stable across call sites).
inline cplx cpow_int(cplx base, unsigned n) {
    cplx result(1.0, 0.0);
    while (n > 0) {
        if (n & 1u) result *= base;
        base *= base;
        n >>= 1u;
    }
    return result;
}

// Principal m-th root: argument of the result lies in (-pi/m, pi/m].
inline cplx principal_root(const cplx& w, unsigned m) {
    if (m == 1) return w;
    if (w == cplx(0.0, 0.0)) return w;
    const double r = std::pow(std::abs(w), 1.0 / static_cast<double>(m));
    const double t = std::arg(w) / static_cast<double>(m);
    return std::polar(r, t);
}

inline bool approx_eq(const cplx& a, const cplx& b, double tol) {
    return std::abs(a - b) <= tol * (1.0 + std::max(std::abs(a), std::abs(b)));
}

// Lexicographic order on (Re, Im); the canonical term order of ExpSum.
inline bool cplx_lex_less(const cplx& a, const cplx& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

inline std::size_t hardware_threads_cap() {
    if (const char* env = std::getenv("HYPERALG_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1) return static_cast<std::size_t>(v);
    }
    return 1;
}

// Chunked parallel map-reduce over [0, n). The combiner must be associative
// and commutative so that the result does not depend on chunk boundaries;
// all users reduce with max or logical-and, which satisfy this.
template <class T, class Body, class Combine>
T parallel_reduce(std::size_t n, T init, Body body, Combine combine) {
    const std::size_t nthreads = std::min(hardware_threads_cap(), n == 0 ? std::size_t(1) : n);
    if (nthreads <= 1) {
        T acc = init;
        for (std::size_t i = 0; i < n; ++i) acc = combine(acc, body(i));
        return acc;
    }
    std::vector<T> partial(nthreads, init);
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    const std::size_t chunk = (n + nthreads - 1) / nthreads;
    for (std::size_t t = 0; t < nthreads; ++t) {
        pool.emplace_back([&, t]() {
            const std::size_t lo = t * chunk;
            const std::size_t hi = std::min(n, lo + chunk);
            T acc = init;
            for (std::size_t i = lo; i < hi; ++i) acc = combine(acc, body(i));
            partial[t] = acc;
        });
    }
    for (auto& th : pool) th.join();
    T acc = init;
    for (const T& p : partial) acc = combine(acc, p);
    return acc;
}

}  // namespace hyperalg
