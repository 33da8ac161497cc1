// tests/oracles.hpp
//
// Test-only reference implementations. Each one takes a different route
// from the library code it checks: trial division instead of sieving,
// Pascal's triangle instead of the 2-adic binomial, exact rationals instead
// of Frac64, and O(MH) recomputation instead of sliding windows.
#pragma once

#include <complex>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "torusmu/frac64.hpp"

namespace oracle {

using cplx = std::complex<double>;
using torusmu::u128;

inline std::vector<std::pair<std::int64_t, unsigned>> factor(std::int64_t n) {
    std::vector<std::pair<std::int64_t, unsigned>> out;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e) out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1u);
    return out;
}

inline int moebius(std::int64_t n) {
    int sign = 1;
    for (auto [p, e] : factor(n)) {
        if (e > 1) return 0;
        sign = -sign;
    }
    return sign;
}

inline int liouville(std::int64_t n) {
    unsigned omega = 0;
    for (auto [p, e] : factor(n)) omega += e;
    return omega % 2 ? -1 : 1;
}

/// Rows 0..nmax of Pascal's triangle mod 2^64, columns 0..kmax.
inline std::vector<std::vector<std::uint64_t>> pascal(std::size_t nmax, std::size_t kmax) {
    std::vector<std::vector<std::uint64_t>> t(nmax + 1, std::vector<std::uint64_t>(kmax + 1, 0));
    for (std::size_t n = 0; n <= nmax; ++n) {
        t[n][0] = 1;
        for (std::size_t k = 1; k <= kmax && k <= n; ++k) t[n][k] = t[n - 1][k - 1] + (k <= n - 1 ? t[n - 1][k] : 0);
    }
    return t;
}

/// Exact rational with a 128-bit numerator, for small hand computations.
struct Rat {
    __int128 num = 0;
    __int128 den = 1;

    static __int128 gcd(__int128 a, __int128 b) {
        if (a < 0) a = -a;
        if (b < 0) b = -b;
        while (b) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }
    Rat(__int128 n = 0, __int128 d = 1) : num(n), den(d) {
        __int128 g = gcd(num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        if (den < 0) {
            num = -num;
            den = -den;
        }
    }
    friend Rat operator+(Rat a, Rat b) { return Rat(a.num * b.den + b.num * a.den, a.den * b.den); }
    friend Rat operator-(Rat a, Rat b) { return Rat(a.num * b.den - b.num * a.den, a.den * b.den); }
    friend Rat operator*(Rat a, Rat b) { return Rat(a.num * b.num, a.den * b.den); }
    friend bool operator==(Rat a, Rat b) { return a.num == b.num && a.den == b.den; }

    /// Value mod 1 in [0, 1).
    Rat mod1() const {
        __int128 r = num % den;
        if (r < 0) r += den;
        return Rat(r, den);
    }
    /// Nearest Frac64 to this value mod 1.
    torusmu::Frac64 to_frac64() const {
        Rat f = mod1();
        u128 scaled = (static_cast<u128>(f.num) << 64) + static_cast<u128>(f.den) / 2;
        return torusmu::Frac64(static_cast<std::uint64_t>(scaled / static_cast<u128>(f.den)));
    }
};

/// (1/M) Σ_{M≤m<2M} (1/H)|Σ_{m≤n<m+H} t(n)| recomputing every window.
template <class Term>
double naive_short_interval(Term&& term, std::int64_t M, std::int64_t H) {
    double total = 0.0;
    for (std::int64_t m = M; m < 2 * M; ++m) {
        cplx w{};
        for (std::int64_t n = m; n < m + H; ++n) w += term(n);
        total += std::abs(w) / static_cast<double>(H);
    }
    return total / static_cast<double>(M);
}

}  // namespace oracle
