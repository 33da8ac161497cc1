// tests/test_stats.cpp
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "torusmu/errors.hpp"
#include "torusmu/stats.hpp"

using namespace torusmu;
using cplx = std::complex<double>;

namespace {

Orbit constant_one() { return Orbit(AffineSkewMap(1, Frac64(0)), TorusPoint{Frac64(0)}); }

Orbit sqrt2_square() { return make_orbit(PolySpec::parse("sqrt2,0,0")); }

std::complex<long double> geometric_average(Frac64 beta, std::int64_t N) {
    // (1/N) Σ_{n=1}^{N} e^{2πinβ}
    const long double tau = 6.283185307179586476925286766559L;
    long double b = static_cast<long double>(beta.raw) * 0x1p-64L;
    std::complex<long double> z = std::polar(1.0L, tau * b);
    std::complex<long double> zN = std::polar(1.0L, tau * std::fmod(b * static_cast<long double>(N), 1.0L));
    return z * (1.0L - zN) / (1.0L - z) / static_cast<long double>(N);
}

}  // namespace

TEST_CASE("block schemes") {
    auto sqrt_blocks = BlockScheme::parse("sqrt", 30);
    CHECK(sqrt_blocks.boundaries() == std::vector<std::int64_t>{1, 3, 5, 7, 10, 13, 16, 19, 22, 26, 30, 34});
    CHECK(sqrt_blocks.block_of(1) == 1);
    CHECK(sqrt_blocks.block_of(2) == 1);
    CHECK(sqrt_blocks.block_of(3) == 2);
    CHECK(sqrt_blocks.block_of(0) == 0);
    CHECK(sqrt_blocks.block_of(34) == sqrt_blocks.block_count() + 1);
    CHECK(sqrt_blocks.blocks_ending_by(10) == 4);
    CHECK(sqrt_blocks.blocks_ending_by(2) == 0);
    CHECK(BlockScheme::parse("list:1,4,9,16", 0).block_count() == 3);
    CHECK(BlockScheme::parse("pow:0.5:1", 30).boundaries() == sqrt_blocks.boundaries());
    CHECK(BlockScheme::parse("log2", 100).b(2) == 2);
    CHECK_THROWS_AS(BlockScheme::from_list({2, 3}), ParameterError);
    CHECK_THROWS_AS(BlockScheme::from_list({1, 3, 3}), ParameterError);
    CHECK_THROWS_AS(BlockScheme::parse("cubic", 10), ConfigError);
}

TEST_CASE("grids") {
    CHECK(icbrt(0) == 0);
    CHECK(icbrt(7) == 1);
    CHECK(icbrt(8) == 2);
    CHECK(icbrt(999'999) == 99);
    CHECK(icbrt(1'000'000) == 100);
    auto g = ShortIntervalGrid::cube_root({10'000, 100'000, 1'000'000});
    CHECK(g.points() == std::vector<std::pair<std::int64_t, std::int64_t>>{{10'000, 21}, {100'000, 46}, {1'000'000, 100}});
    CHECK_THROWS_AS(ShortIntervalGrid({{10, 11}}), ParameterError);
    CHECK_THROWS_AS(ShortIntervalGrid({{10, 0}}), ParameterError);
    CHECK_THROWS_AS(ShortIntervalGrid({{10, 4}, {100, 3}}), ParameterError);
    CHECK_THROWS_AS(ShortIntervalGrid({{10, 4}, {20, 8}}), ParameterError);
}

TEST_CASE("basic average") {
    auto one = constant_one();
    CHECK(basic_average(one, MultiplicativeSpec::moebius(), 6) == cplx(-1.0 / 6.0, 0.0));
    CHECK(basic_average(one, MultiplicativeSpec::archimedean(0.0), 1000) == cplx(1.0, 0.0));
    CHECK(basic_average(one, MultiplicativeSpec::moebius(), 1'000'000).real() * 1e6 == doctest::Approx(212.0));
    auto orbit = sqrt2_square();
    auto nu = MultiplicativeSpec::random_unimodular(8);
    cplx ref{};
    for (std::int64_t n = 1; n <= 5000; ++n)
        ref += orbit.at(n).phase() * eval_multiplicative(nu, n, n + 1).at(n);
    CHECK(std::abs(basic_average(orbit, nu, 5000) - ref / 5000.0) < 1e-12);
}

TEST_CASE("kbsz correlation on rotations") {
    Frac64 alpha(0x9e3779b97f4a7c15ULL);
    Orbit rot(AffineSkewMap(1, alpha), TorusPoint{Frac64(0)});
    const std::int64_t N = 100'000;
    for (auto [r, s] : {std::pair{2, 3}, std::pair{5, 47}, std::pair{43, 7}}) {
        cplx c = kbsz_correlation(rot, r, s, N);
        Frac64 beta = static_cast<std::int64_t>(r - s) * alpha;
        auto closed = geometric_average(beta, N);
        CHECK(std::abs(c - cplx(static_cast<double>(closed.real()), static_cast<double>(closed.imag()))) < 1e-9);
        CHECK(std::abs(c) <= 1.0 / (2.0 * N * beta.distance()) + 1e-12);
    }
    CHECK(kbsz_correlation(constant_one(), 2, 3, 1000) == cplx(1.0, 0.0));
    CHECK_THROWS_AS(kbsz_correlation(rot, 3, 3, 10), ParameterError);
    CHECK_THROWS_AS(kbsz_correlation(rot, 0, 3, 10), ParameterError);
    cplx c = kbsz_correlation(sqrt2_square(), 2, 3, 100'000, 3);
    CHECK(std::abs(std::abs(c) - 0.0035752891261219247) < 1e-9);
    CHECK(kbsz_correlation(sqrt2_square(), 2, 3, 100'000, 1) == c);
}

TEST_CASE("weighted block statistic") {
    auto one = constant_one();
    auto single = BlockScheme::from_list({1, 2});
    CHECK(weighted_block_stat(one, MultiplicativeSpec::moebius(), single, 1) == 0.5);
    CHECK_THROWS_AS(weighted_block_stat(one, MultiplicativeSpec::moebius(), single, 2), ParameterError);

    auto blocks = BlockScheme::parse("sqrt", 100'000);
    std::int64_t K = blocks.blocks_ending_by(100'000);
    // Two-pass reference: block sums of μ first, then the weighted sum.
    auto mu = sieve_moebius(1, blocks.b(K + 1));
    double ref = 0.0;
    for (std::int64_t k = 1; k <= K; ++k) {
        std::int64_t s = 0;
        for (std::int64_t n = blocks.b(k); n < blocks.b(k + 1); ++n) s += mu.at(n);
        ref += std::abs(static_cast<double>(s));
    }
    ref /= static_cast<double>(blocks.b(K + 1));
    CHECK(weighted_block_stat(one, MultiplicativeSpec::moebius(), blocks, K) == ref);

    auto orbit = sqrt2_square();
    for (std::int64_t target : {10'000, 100'000}) {
        double w = weighted_block_stat(orbit, MultiplicativeSpec::moebius(), blocks, blocks.blocks_ending_by(target), 2);
        CHECK(w >= 0.0);
        CHECK(w <= 1.0);
    }
    auto sums = block_sums(orbit, MultiplicativeSpec::moebius(), blocks, 50);
    cplx total{};
    for (auto b : sums) total += b;
    CHECK(std::abs(signed_block_average(orbit, MultiplicativeSpec::moebius(), blocks, 50) - total / double(blocks.b(51))) < 1e-14);
}

TEST_CASE("sliding window equals naive recomputation") {
    auto orbit = sqrt2_square();
    for (const auto& nu : {MultiplicativeSpec::moebius(), MultiplicativeSpec::random_unimodular(17)}) {
        NuSource src(nu);
        auto term = [&](std::int64_t n) { return orbit.at(n).phase() * src(n); };
        for (auto [M, H] : {std::pair<std::int64_t, std::int64_t>{100, 1}, {500, 7}, {2000, 13}, {3000, 200}}) {
            double naive = oracle::naive_short_interval(term, M, H);
            CHECK(std::abs(short_interval_stat(orbit, nu, M, H) - naive) < 1e-9);
            CHECK(std::abs(short_interval_stat(orbit, nu, M, H, {3, 17}) - naive) < 1e-9);
            CHECK(std::abs(short_interval_stat(orbit, nu, M, H, {1, 1}) - naive) < 1e-9);
        }
    }
    auto one = constant_one();
    CHECK(short_interval_stat(one, MultiplicativeSpec::archimedean(0.0), 1000, 10) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(short_interval_stat(one, MultiplicativeSpec::moebius(), 10, 11), ParameterError);
    CHECK_THROWS_AS(short_interval_stat(one, MultiplicativeSpec::moebius(), 10, 0), ParameterError);
}

TEST_CASE("short interval statistic matches the derived values") {
    auto poly = PolySpec::parse("sqrt2,0,0");
    CHECK(std::abs(short_interval_stat(poly, MultiplicativeSpec::moebius(), 10'000, 21) - 0.15159482852931816) < 1e-9);
    CHECK(std::abs(short_interval_stat(poly, MultiplicativeSpec::moebius(), 100'000, 46) - 0.10210968908798891) < 1e-9);
}

TEST_CASE("results do not depend on the worker count") {
    auto orbit = sqrt2_square();
    auto nu = MultiplicativeSpec::random_unimodular(2);
    auto blocks = BlockScheme::parse("sqrt", 300'000);
    for (unsigned w : {2u, 3u, 8u}) {
        CHECK(basic_average(orbit, nu, 300'000, w) == basic_average(orbit, nu, 300'000, 1));
        CHECK(weighted_block_stat(orbit, nu, blocks, 700, w) == weighted_block_stat(orbit, nu, blocks, 700, 1));
        CHECK(short_interval_stat(orbit, nu, 200'000, 58, {w, 1 << 16}) ==
              short_interval_stat(orbit, nu, 200'000, 58, {1, 1 << 16}));
    }
}

TEST_CASE("hx blocks") {
    auto one = hx_blocks(ShortIntervalGrid({{10, 4}}), {1});
    CHECK(one.boundaries() == std::vector<std::int64_t>{1, 13, 17, 21});
    CHECK(hx_blocks(ShortIntervalGrid({}), {}).boundaries() == std::vector<std::int64_t>{1});
    auto two = hx_blocks(ShortIntervalGrid({{10, 4}, {100, 5}}), {1, 0});
    const auto& b = two.boundaries();
    CHECK(std::is_sorted(b.begin(), b.end()));
    CHECK(std::adjacent_find(b.begin(), b.end()) == b.end());
    CHECK(b.back() == 200);
    CHECK_THROWS_AS(hx_blocks(ShortIntervalGrid({{10, 4}}), {4}), ParameterError);
    CHECK_THROWS_AS(hx_blocks(ShortIntervalGrid({{10, 4}, {20, 5}}), {0, 0}), ParameterError);
    CHECK_THROWS_AS(hx_blocks(ShortIntervalGrid({{10, 4}}), {}), ParameterError);
}
