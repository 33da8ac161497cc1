// src/quasi.cpp
#include "torusmu/quasi.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "torusmu/errors.hpp"
#include "torusmu/reduce.hpp"

namespace torusmu {

namespace {

void check_freq_dim(const AffineSkewMap& map, const std::vector<std::int64_t>& m) {
    if (static_cast<int>(m.size()) != map.dim())
        throw DimensionError("frequency of length " + std::to_string(m.size()) + " for a map of dimension " +
                             std::to_string(map.dim()));
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t out = 0;
    if (__builtin_mul_overflow(a, b, &out)) throw ParameterError("frequency overflow in quasi-eigenfunction");
    return out;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t out = 0;
    if (__builtin_add_overflow(a, b, &out)) throw ParameterError("frequency overflow in quasi-eigenfunction");
    return out;
}

/// Exact C(r, k) as int64.
std::int64_t binomial_exact(std::uint64_t r, unsigned k) {
    if (k > r) return 0;
    u128 acc = 1;
    for (unsigned i = 1; i <= k; ++i) {
        acc = acc * (r - k + i) / i;
        if (acc > static_cast<u128>(std::numeric_limits<std::int64_t>::max()))
            throw ParameterError("binomial coefficient overflow in quasi-eigenfunction");
    }
    return static_cast<std::int64_t>(acc);
}

/// Frequency (A^j)ᵗ m (with identity subtracted when minus_identity) and the
/// translation pairing m·t_j, where t_j = Σ_{i<j} A^i b.
std::pair<std::vector<std::int64_t>, Frac64> transport(const AffineSkewMap& map, const std::vector<std::int64_t>& m,
                                                       std::uint64_t j, bool minus_identity) {
    const int d = map.dim();
    std::vector<std::int64_t> out(static_cast<std::size_t>(d), 0);
    for (int col = 1; col <= d; ++col) {
        std::int64_t acc = 0;
        for (int row = col + (minus_identity ? 1 : 0); row <= d; ++row) {
            std::int64_t mi = m[static_cast<std::size_t>(row - 1)];
            if (mi == 0) continue;
            acc = checked_add(acc, checked_mul(mi, binomial_exact(j, static_cast<unsigned>(row - col))));
        }
        out[static_cast<std::size_t>(col - 1)] = acc;
    }
    std::uint64_t pairing = 0;
    for (int i = 1; i <= d; ++i)
        pairing += static_cast<std::uint64_t>(m[static_cast<std::size_t>(i - 1)]) *
                   binomial_mod64(j, static_cast<unsigned>(i));
    return {std::move(out), pairing * map.alpha()};
}

}  // namespace

bool QuasiEig::is_constant() const {
    return std::all_of(m.begin(), m.end(), [](std::int64_t v) { return v == 0; });
}

std::complex<double> QuasiEig::operator()(const TorusPoint& x) const {
    if (static_cast<int>(m.size()) != x.dim()) throw DimensionError("quasi-eigenfunction evaluated off its torus");
    Frac64 acc = c;
    for (int i = 0; i < x.dim(); ++i) acc += m[static_cast<std::size_t>(i)] * x[i];
    return acc.phase();
}

QuasiEig operator*(const QuasiEig& f, const QuasiEig& g) {
    if (f.m.size() != g.m.size()) throw DimensionError("product of quasi-eigenfunctions on different tori");
    QuasiEig h{f.m, f.c + g.c};
    for (std::size_t i = 0; i < h.m.size(); ++i) h.m[i] = checked_add(h.m[i], g.m[i]);
    return h;
}

QuasiEig apply_WT(const AffineSkewMap& map, const QuasiEig& f) { return apply_W_power(map, f, 1); }

QuasiEig apply_W_power(const AffineSkewMap& map, const QuasiEig& f, std::uint64_t r) {
    check_freq_dim(map, f.m);
    auto [freq, constant] = transport(map, f.m, r, /*minus_identity=*/true);
    return QuasiEig{std::move(freq), constant};
}

QuasiEig compose(const QuasiEig& f, const AffineSkewMap& map, std::uint64_t j) {
    check_freq_dim(map, f.m);
    auto [freq, constant] = transport(map, f.m, j, /*minus_identity=*/false);
    return QuasiEig{std::move(freq), f.c + constant};
}

int ek_degree(const AffineSkewMap& map, const Character& chi) {
    check_freq_dim(map, chi.m);
    // (Aᵗ-I) shifts the frequency one slot towards the front, so the degree
    // is the position of the last nonzero entry.
    for (int i = map.dim(); i >= 1; --i)
        if (chi.m[static_cast<std::size_t>(i - 1)] != 0) return i;
    return 0;
}

bool check_tr_lemma(const AffineSkewMap& map, const QuasiEig& f, std::uint64_t r, int kmax) {
    if (r == 0) throw ParameterError("check_tr_lemma needs r >= 1");
    const int k = ek_degree(map, Character{f.m});
    if (k > kmax)
        throw ParameterError("quasi-eigenfunction of degree " + std::to_string(k) + " exceeds kmax " +
                             std::to_string(kmax));
    QuasiEig lhs = f;
    QuasiEig base = f;
    for (int i = 0; i < k; ++i) {
        lhs = apply_W_power(map, lhs, r);
        base = apply_WT(map, base);
    }
    if (!lhs.is_constant() || !base.is_constant()) return false;
    std::uint64_t rk = 1;
    for (int i = 0; i < k; ++i) rk *= r;
    return lhs.c == rk * base.c;
}

std::complex<double> birkhoff_average(const AffineSkewMap& map, const QuasiEig& f, const TorusPoint& p0,
                                      std::int64_t N, unsigned workers) {
    check_freq_dim(map, f.m);
    if (N < 1) throw ParameterError("birkhoff_average needs N >= 1");
    constexpr std::size_t kChunksPerUnit = 64;
    auto total = chunked_sum<std::complex<double>>(
        static_cast<std::size_t>(N), workers, kChunksPerUnit,
        [&](std::size_t begin, std::size_t end, std::span<std::complex<double>> out) {
            TorusPoint x = jump(map, p0, begin);
            fill_chunk_sums(begin, end, out, [&] {
                std::complex<double> v = f(x);
                x = step(map, x);
                return v;
            });
        });
    return total / static_cast<double>(N);
}

std::vector<std::pair<std::int64_t, std::int64_t>> key_lemma_search(Frac64 c1, Frac64 c2, std::int64_t bound,
                                                                    double tol) {
    if (bound < 1) throw ParameterError("key_lemma_search needs bound >= 1");
    if (!(tol >= 0.0)) throw ParameterError("key_lemma_search needs tol >= 0");
    std::vector<std::pair<std::int64_t, std::int64_t>> hits;
    for (std::int64_t r = 1; r <= bound; ++r) {
        for (std::int64_t s = 1; s <= bound; ++s) {
            if (std::gcd(r, s) != 1) continue;
            Frac64 diff = r * c1 - s * c2;
            bool hit = tol == 0.0 ? diff.raw == 0 : diff.distance() < tol;
            if (hit) hits.emplace_back(r, s);
        }
    }
    return hits;
}

}  // namespace torusmu
