// include/torusmu/frac64.hpp
//
// Fixed-point elements of the circle R/Z. A Frac64 stores raw/2^64, so
// wrapping unsigned addition is exact addition mod 1 and multiplying by an
// integer is exact as well. The only rounding in the whole pipeline happens
// when a real constant is converted into a Frac64 and when a Frac64 is turned
// into a floating point angle.
#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstdint>
#include <numbers>

namespace torusmu {

using u128 = unsigned __int128;

struct Frac64 {
    std::uint64_t raw = 0;

    constexpr Frac64() = default;
    constexpr explicit Frac64(std::uint64_t r) : raw(r) {}

    /// Nearest Frac64 to p/q mod 1 (q > 0).
    static constexpr Frac64 from_ratio(std::int64_t p, std::uint64_t q) {
        std::int64_t rem = p % static_cast<std::int64_t>(q);
        if (rem < 0) rem += static_cast<std::int64_t>(q);
        u128 scaled = (static_cast<u128>(static_cast<std::uint64_t>(rem)) << 64) + q / 2;
        return Frac64(static_cast<std::uint64_t>(scaled / q));
    }

    /// Nearest Frac64 to x mod 1; intended for phases computed in double.
    static Frac64 from_double(double x) {
        double f = x - std::floor(x);
        long double scaled = std::ldexp(static_cast<long double>(f), 64);
        long double r = std::nearbyint(scaled);
        if (r >= 18446744073709551616.0L) return Frac64(0);
        return Frac64(static_cast<std::uint64_t>(r));
    }

    /// Round a 128-fractional-bit value to the nearest Frac64.
    static constexpr Frac64 from_frac128(u128 v) {
        return Frac64(static_cast<std::uint64_t>((v + (static_cast<u128>(1) << 63)) >> 64));
    }

    constexpr Frac64& operator+=(Frac64 o) { raw += o.raw; return *this; }
    constexpr Frac64& operator-=(Frac64 o) { raw -= o.raw; return *this; }
    friend constexpr Frac64 operator+(Frac64 a, Frac64 b) { return Frac64(a.raw + b.raw); }
    friend constexpr Frac64 operator-(Frac64 a, Frac64 b) { return Frac64(a.raw - b.raw); }
    friend constexpr Frac64 operator-(Frac64 a) { return Frac64(0 - a.raw); }
    friend constexpr bool operator==(Frac64, Frac64) = default;

    /// k·x mod 1. Only k mod 2^64 matters, so negative k wraps correctly.
    template <std::integral I>
    friend constexpr Frac64 operator*(I k, Frac64 x) {
        return Frac64(static_cast<std::uint64_t>(k) * x.raw);
    }

    /// Value in [0, 1).
    constexpr double to_double() const { return std::ldexp(static_cast<double>(raw), -64); }

    /// Representative in [-1/2, 1/2).
    double to_signed_double() const {
        return std::ldexp(static_cast<double>(static_cast<std::int64_t>(raw)), -64);
    }

    /// e^{2πi x}.
    std::complex<double> phase() const {
        double angle = 2.0 * std::numbers::pi * to_signed_double();
        return {std::cos(angle), std::sin(angle)};
    }

    /// Distance to the nearest integer, ‖x‖, in raw units.
    constexpr std::uint64_t distance_raw() const {
        std::uint64_t neg = 0 - raw;
        return raw < neg ? raw : neg;
    }

    double distance() const { return std::ldexp(static_cast<double>(distance_raw()), -64); }
};

/// Multiplicative inverse of an odd number modulo 2^64.
constexpr std::uint64_t inverse_odd_mod64(std::uint64_t a) {
    std::uint64_t x = a;  // correct to 3 bits for odd a
    for (int i = 0; i < 5; ++i) x *= 2 - a * x;
    return x;
}

/// C(n, k) mod 2^64, computed from the falling factorial with powers of two
/// split off so the odd part of k! can be inverted.
constexpr std::uint64_t binomial_mod64(std::uint64_t n, unsigned k) {
    if (k > n) return 0;
    std::uint64_t odd_num = 1;
    std::uint64_t odd_den = 1;
    int twos = 0;
    for (unsigned i = 0; i < k; ++i) {
        std::uint64_t f = n - i;
        int tz = std::countr_zero(f);
        twos += tz;
        odd_num *= f >> tz;
        std::uint64_t g = i + 1;
        int gz = std::countr_zero(g);
        twos -= gz;
        odd_den *= g >> gz;
    }
    if (twos >= 64) return 0;
    return (odd_num * inverse_odd_mod64(odd_den)) << twos;
}

}  // namespace torusmu
