// include/torusmu/constants.hpp
//
// High-precision real constants, reduced mod 1 and rounded once to 128
// fractional bits. Accepted tokens (each optionally prefixed by '-'):
//   sqrt2, sqrtK (K ≥ 2), phi, pi-frac, decimal literals (1.25, 3e-2),
//   and rationals a/b.
#pragma once

#include <string>
#include <string_view>

#include "torusmu/frac64.hpp"

namespace torusmu {

struct Coefficient {
    std::string token;
    u128 frac = 0;            // value mod 1 scaled by 2^128, rounded to nearest
    bool zero = false;        // the exact value is 0
    bool irrational = false;  // token names a known irrational number
};

/// Throws SpecError for an unrecognised token.
Coefficient resolve_coefficient(std::string_view token);

/// Shorthand for the nearest Frac64 to a token's value mod 1.
Frac64 resolve_frac64(std::string_view token);

}  // namespace torusmu
