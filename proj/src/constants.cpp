// src/constants.cpp
#include "torusmu/constants.hpp"

#include <gmp.h>
#include <mpfr.h>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <regex>

#include "torusmu/errors.hpp"

namespace torusmu {

namespace {

constexpr mpfr_prec_t kWorkingBits = 400;

/// RAII wrapper around an mpfr_t at the working precision.
class BigReal {
public:
    BigReal() { mpfr_init2(v_, kWorkingBits); }
    ~BigReal() { mpfr_clear(v_); }
    BigReal(const BigReal&) = delete;
    BigReal& operator=(const BigReal&) = delete;
    mpfr_ptr get() { return v_; }

private:
    mpfr_t v_;
};

bool is_perfect_square(unsigned long k) {
    unsigned long r = 0;
    while ((r + 1) * (r + 1) <= k) ++r;
    return r * r == k;
}

void set_decimal(mpfr_ptr x, const std::string& text, std::string_view token) {
    static const std::regex kDecimal(R"([0-9]+(\.[0-9]*)?([eE][-+]?[0-9]+)?|\.[0-9]+([eE][-+]?[0-9]+)?)");
    if (!std::regex_match(text, kDecimal))
        throw SpecError("unrecognised coefficient token '" + std::string(token) + "'");
    if (mpfr_set_str(x, text.c_str(), 10, MPFR_RNDN) != 0 && !mpfr_number_p(x))
        throw SpecError("cannot parse coefficient '" + std::string(token) + "'");
}

u128 frac128_of(mpfr_ptr x) {
    BigReal fl;
    mpfr_floor(fl.get(), x);
    mpfr_sub(x, x, fl.get(), MPFR_RNDN);
    mpfr_mul_2ui(x, x, 128, MPFR_RNDN);
    mpz_t z;
    mpz_init(z);
    mpfr_get_z(z, x, MPFR_RNDN);
    mpz_fdiv_r_2exp(z, z, 128);
    std::uint64_t limbs[2] = {0, 0};
    std::size_t count = 0;
    mpz_export(limbs, &count, -1, sizeof(std::uint64_t), 0, 0, z);
    mpz_clear(z);
    return (static_cast<u128>(limbs[1]) << 64) | limbs[0];
}

}  // namespace

Coefficient resolve_coefficient(std::string_view token) {
    Coefficient c;
    c.token = std::string(token);
    std::string body(token);
    bool negative = false;
    if (!body.empty() && (body[0] == '-' || body[0] == '+')) {
        negative = body[0] == '-';
        body.erase(0, 1);
    }
    if (body.empty()) throw SpecError("empty coefficient token");

    BigReal x;
    if (body == "phi") {
        mpfr_sqrt_ui(x.get(), 5, MPFR_RNDN);
        mpfr_add_ui(x.get(), x.get(), 1, MPFR_RNDN);
        mpfr_div_2ui(x.get(), x.get(), 1, MPFR_RNDN);
        c.irrational = true;
    } else if (body == "pi-frac") {
        mpfr_const_pi(x.get(), MPFR_RNDN);
        mpfr_sub_ui(x.get(), x.get(), 3, MPFR_RNDN);
        c.irrational = true;
    } else if (body.rfind("sqrt", 0) == 0) {
        std::string digits = body.substr(4);
        if (digits.empty() || digits.size() > 9 ||
            !std::all_of(digits.begin(), digits.end(), [](unsigned char ch) { return std::isdigit(ch); }))
            throw SpecError("bad square-root token '" + c.token + "'");
        unsigned long k = std::stoul(digits);
        if (k < 2) throw SpecError("sqrtK needs K >= 2");
        mpfr_sqrt_ui(x.get(), k, MPFR_RNDN);
        c.irrational = !is_perfect_square(k);
    } else if (auto slash = body.find('/'); slash != std::string::npos) {
        BigReal den;
        set_decimal(x.get(), body.substr(0, slash), token);
        set_decimal(den.get(), body.substr(slash + 1), token);
        if (mpfr_zero_p(den.get())) throw SpecError("zero denominator in '" + c.token + "'");
        mpfr_div(x.get(), x.get(), den.get(), MPFR_RNDN);
    } else {
        set_decimal(x.get(), body, token);
    }
    if (negative) mpfr_neg(x.get(), x.get(), MPFR_RNDN);
    c.zero = mpfr_zero_p(x.get()) != 0;
    c.frac = frac128_of(x.get());
    return c;
}

Frac64 resolve_frac64(std::string_view token) { return Frac64::from_frac128(resolve_coefficient(token).frac); }

}  // namespace torusmu
