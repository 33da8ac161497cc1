// tests/test_arith.cpp
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "torusmu/arith.hpp"
#include "torusmu/errors.hpp"

using namespace torusmu;

TEST_CASE("sieve_moebius small ranges") {
    auto seg = sieve_moebius(1, 7);
    CHECK(seg.values == std::vector<std::int8_t>{1, -1, -1, 0, -1, 1});
    CHECK(sieve_moebius(1, 2).values == std::vector<std::int8_t>{1});
    CHECK(seg.lo == 1);
    CHECK(seg.hi == 7);
    CHECK(seg.size() == 6);
}

TEST_CASE("sieve_moebius errors") {
    CHECK_THROWS_AS(sieve_moebius(0, 10), DomainError);
    CHECK_THROWS_AS(sieve_moebius(-5, 10), DomainError);
    CHECK_THROWS_AS(sieve_moebius(10, 10), DomainError);
    CHECK_THROWS_AS(sieve_moebius(1, 102, 100), CapacityError);
    CHECK_NOTHROW(sieve_moebius(1, 101, 100));
}

TEST_CASE("mu and lambda agree with trial division on offset segments") {
    for (std::int64_t lo : {1LL, 2LL, 999'983LL, 1'000'000'000'000LL}) {
        auto mu = sieve_moebius(lo, lo + 2000);
        auto la = sieve_liouville(lo, lo + 2000);
        for (std::int64_t n = lo; n < lo + 2000; ++n) {
            REQUIRE(mu.at(n) == oracle::moebius(n));
            REQUIRE(la.at(n) == oracle::liouville(n));
        }
    }
}

TEST_CASE("Liouville and trivial character") {
    auto la = eval_multiplicative(MultiplicativeSpec::liouville(), 1, 5);
    CHECK(la.values == std::vector<cplx>{1.0, -1.0, -1.0, 1.0});
    auto one = eval_multiplicative(MultiplicativeSpec::archimedean(0.0), 1000, 3000);
    for (auto v : one.values) CHECK(v == cplx(1.0, 0.0));
}

TEST_CASE("custom spec assembles values from prime powers") {
    PrimePowerTable t{{{2, 1}, cplx(0, 1)}, {{2, 2}, cplx(-1, 0)}, {{3, 1}, cplx(1, 0)}};
    auto spec = MultiplicativeSpec::custom(t);
    auto seg = eval_multiplicative(spec, 12, 13);
    // Direct multiplicativity oracle: ν(12) = ν(4)·ν(3).
    CHECK(seg.at(12) == t.at({2, 2}) * t.at({3, 1}));
    CHECK(seg.at(12) == cplx(-1.0, 0.0));
    CHECK(eval_multiplicative(spec, 1, 2).at(1) == cplx(1.0, 0.0));
}

TEST_CASE("custom spec errors") {
    CHECK_THROWS_AS(MultiplicativeSpec::custom({{{2, 1}, cplx(1.0 + 1e-6, 0)}}), SpecError);
    CHECK_NOTHROW(MultiplicativeSpec::custom({{{2, 1}, cplx(1.0 + 0x1p-32, 0)}}));
    CHECK_THROWS_AS(MultiplicativeSpec::custom({{{4, 1}, cplx(1, 0)}}), SpecError);
    CHECK_THROWS_AS(MultiplicativeSpec::custom({{{2, 0}, cplx(1, 0)}}), SpecError);
    // 8 = 2^3 needs an explicit entry; no completely-multiplicative fallback.
    auto spec = MultiplicativeSpec::custom({{{2, 1}, cplx(0, 1)}, {{2, 2}, cplx(-1, 0)}});
    CHECK_NOTHROW(eval_multiplicative(spec, 1, 3));
    CHECK_NOTHROW(eval_multiplicative(spec, 4, 5));
    CHECK_THROWS_AS(eval_multiplicative(spec, 8, 9), SpecError);
    CHECK_THROWS_AS(eval_multiplicative(spec, 3, 4), SpecError);
}

TEST_CASE("mertens") {
    CHECK(mertens(1) == 1);
    CHECK(mertens(2) == 0);
    std::int64_t oracle_sum = 0;
    for (std::int64_t n = 1; n <= 10'000; ++n) oracle_sum += oracle::moebius(n);
    CHECK(mertens(10'000) == oracle_sum);
    CHECK(mertens(10'000, 3, 777) == oracle_sum);
    CHECK_THROWS_AS(mertens(0), DomainError);
}

TEST_CASE("multiplicativity on random coprime pairs") {
    std::mt19937_64 rng(5);
    auto random_spec = MultiplicativeSpec::random_unimodular(9);
    auto arch = MultiplicativeSpec::archimedean(3.7);
    int checked = 0;
    while (checked < 10'000) {
        std::int64_t m = 1 + static_cast<std::int64_t>(rng() % 3162);
        std::int64_t n = 1 + static_cast<std::int64_t>(rng() % (10'000'000 / m));
        if (std::gcd(m, n) != 1) continue;
        ++checked;
        std::int64_t mn = m * n;
        CHECK(sieve_moebius(mn, mn + 1).at(mn) == sieve_moebius(m, m + 1).at(m) * sieve_moebius(n, n + 1).at(n));
        CHECK(sieve_liouville(mn, mn + 1).at(mn) ==
              sieve_liouville(m, m + 1).at(m) * sieve_liouville(n, n + 1).at(n));
        if (checked % 10 == 0) {
            for (const auto& spec : {random_spec, arch}) {
                cplx lhs = eval_multiplicative(spec, mn, mn + 1).at(mn);
                cplx rhs = eval_multiplicative(spec, m, m + 1).at(m) * eval_multiplicative(spec, n, n + 1).at(n);
                CHECK(std::abs(lhs - rhs) <= 0x1p-40);
            }
        }
    }
}

TEST_CASE("mu vanishes on multiples of prime squares") {
    std::mt19937_64 rng(13);
    auto primes = primes_up_to(3162);
    for (int i = 0; i < 2000; ++i) {
        std::int64_t p = static_cast<std::int64_t>(primes[rng() % primes.size()]);
        std::int64_t k = 1 + static_cast<std::int64_t>(rng() % (10'000'000 / (p * p)));
        std::int64_t n = p * p * k;
        CHECK(sieve_moebius(n, n + 1).at(n) == 0);
    }
}

TEST_CASE("segmentation does not change values") {
    auto whole = sieve_moebius(1, 1'000'000);
    for (std::int64_t lo = 1; lo < 1'000'000; lo += 1000) {
        auto part = sieve_moebius(lo, lo + 1000);
        for (std::int64_t n = lo; n < lo + 1000 && n < 1'000'000; ++n) REQUIRE(part.at(n) == whole.at(n));
    }
    auto spec = MultiplicativeSpec::random_unimodular(3);
    auto big = eval_multiplicative(spec, 1, 200'000);
    for (std::int64_t lo = 1; lo < 200'000; lo += 997) {
        std::int64_t hi = std::min<std::int64_t>(200'000, lo + 997);
        auto part = eval_multiplicative(spec, lo, hi);
        for (std::int64_t n = lo; n < hi; ++n) REQUIRE(part.at(n) == big.at(n));
    }
}

TEST_CASE("modulus never exceeds one") {
    for (const auto& spec : {MultiplicativeSpec::random_unimodular(21), MultiplicativeSpec::archimedean(-12.5),
                             MultiplicativeSpec::moebius()}) {
        auto seg = eval_multiplicative(spec, 1, 100'000);
        for (auto v : seg.values) REQUIRE(std::abs(v) <= 1.0 + 0x1p-30);
    }
}

TEST_CASE("NuSource serves any forward pattern from aligned segments") {
    auto spec = MultiplicativeSpec::random_unimodular(4);
    auto whole = eval_multiplicative(spec, 1, 100'000);
    NuSource src(spec, 128);
    for (std::int64_t n = 1; n + 300 < 100'000; n += 7) {
        REQUIRE(src(n + 300) == whole.at(n + 300));
        REQUIRE(src(n) == whole.at(n));
    }
    CHECK_THROWS_AS(src(0), DomainError);
}
