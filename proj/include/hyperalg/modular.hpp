#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>

#include "hyperalg/rational.hpp"

namespace hyperalg {
namespace modular {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

inline std::uint64_t addmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    const std::uint64_t s = a + b;
    return (s >= p || s < a) ? s - p : s;
}

inline std::uint64_t submod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return a >= b ? a - b : a + (p - b);
}

inline std::uint64_t powmod(std::uint64_t base, std::uint64_t e, std::uint64_t p) {
    std::uint64_t acc = 1 % p;
    base %= p;
    while (e > 0) {
        if (e & 1u) acc = mulmod(acc, base, p);
        base = mulmod(base, base, p);
        e >>= 1u;
    }
    return acc;
}

inline std::uint64_t invmod(std::uint64_t a, std::uint64_t p) {
    if (a % p == 0) throw std::domain_error("invmod of zero");
    return powmod(a, p - 2, p);  // p prime
}

// Deterministic Miller-Rabin; the listed bases decide primality for all
// inputs below 2^64.
inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % q == 0) return n == q;
    }
    std::uint64_t d = n - 1;
    int r = 0;
    while ((d & 1u) == 0) {
        d >>= 1u;
        ++r;
    }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 0; i + 1 < r; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

/// Fixed, deterministic stream of ~62-bit primes.
class PrimeStream {
public:
    explicit PrimeStream(std::uint64_t start = (1ull << 62) + 1) : next_(start | 1ull) {}

    std::uint64_t next() {
        while (!is_prime_u64(next_)) next_ += 2;
        const std::uint64_t p = next_;
        next_ += 2;
        return p;
    }

private:
    std::uint64_t next_;
};

inline std::uint64_t reduce(const BigInt& v, std::uint64_t p) {
    BigInt r = v % BigInt(p);
    if (r < 0) r += p;
    return r.convert_to<std::uint64_t>();
}

// num * den^{-1} mod p; nullopt when the denominator vanishes mod p.
inline std::optional<std::uint64_t> reduce(const Rational& v, std::uint64_t p) {
    const std::uint64_t den = reduce(denominator(v), p);
    if (den == 0) return std::nullopt;
    return mulmod(reduce(numerator(v), p), invmod(den, p), p);
}

/// Incremental Chinese remaindering: value modulo the product of all primes
/// fed so far.
struct CrtAccumulator {
    BigInt value = 0;
    BigInt modulus = 1;

    void add(std::uint64_t residue, std::uint64_t p) {
        if (modulus == 1) {
            value = residue;
            modulus = p;
            return;
        }
        const std::uint64_t m_mod_p = reduce(modulus, p);
        const std::uint64_t v_mod_p = reduce(value, p);
        const std::uint64_t delta = submod(residue, v_mod_p, p);
        const std::uint64_t t = mulmod(delta, invmod(m_mod_p, p), p);
        value += modulus * BigInt(t);
        modulus *= p;
    }
};

/// Balanced rational reconstruction: recovers n/d with |n|, d <= sqrt(m/2)
/// from a residue u mod m, when such a representative exists.
inline std::optional<Rational> rational_reconstruct(const BigInt& u, const BigInt& m) {
    const BigInt bound = boost::multiprecision::sqrt(BigInt(m / 2));
    BigInt r0 = m, r1 = u % m;
    if (r1 < 0) r1 += m;
    BigInt s0 = 0, s1 = 1;
    while (r1 > bound) {
        const BigInt q = r0 / r1;
        BigInt r2 = r0 - q * r1;
        r0 = r1;
        r1 = r2;
        BigInt s2 = s0 - q * s1;
        s0 = s1;
        s1 = s2;
    }
    if (s1 == 0) return std::nullopt;
    BigInt num = r1, den = s1;
    if (den < 0) {
        den = -den;
        num = -num;
    }
    if (den > bound) return std::nullopt;
    if (boost::multiprecision::gcd(num, den) != 1) return std::nullopt;
    return Rational(num, den);
}

}  // namespace modular
}  // namespace hyperalg
