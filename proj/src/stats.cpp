// src/stats.cpp
#include "torusmu/stats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "torusmu/errors.hpp"
#include "torusmu/reduce.hpp"

namespace torusmu {

namespace {

using cd = std::complex<double>;

std::int64_t floor_power(std::int64_t k, double theta) {
    if (theta == 0.5) {
        auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(k)));
        while (r * r > k) --r;
        while ((r + 1) * (r + 1) <= k) ++r;
        return r;
    }
    return static_cast<std::int64_t>(std::floor(std::pow(static_cast<long double>(k), theta) + 1e-9L));
}

template <class Gap>
std::vector<std::int64_t> generate(std::int64_t until, Gap&& gap) {
    std::vector<std::int64_t> b{1};
    for (std::int64_t k = 1; b.back() <= until; ++k) {
        std::int64_t g = gap(k);
        if (g < 1) throw ParameterError("block gap must be >= 1");
        b.push_back(b.back() + g);
    }
    return b;
}

double parse_double(std::string_view s, std::string_view what) {
    try {
        std::size_t used = 0;
        double v = std::stod(std::string(s), &used);
        if (used != s.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("bad number '" + std::string(s) + "' in " + std::string(what));
    }
}

cd term(Frac64 x, cd nu) { return x.phase() * nu; }

void check_K(const BlockScheme& blocks, std::int64_t K) {
    if (K < 1) throw ParameterError("K must be >= 1");
    if (K > blocks.block_count())
        throw ParameterError("K=" + std::to_string(K) + " exceeds the " + std::to_string(blocks.block_count()) +
                             " complete blocks of scheme '" + blocks.descriptor() + "'");
}

/// Calls body(k0, k1, sink) for contiguous block ranges; sink(k) receives
/// the sums of blocks k0..k1-1 in order.
template <class Emit>
void for_block_ranges(const PhaseSequence& a, const MultiplicativeSpec& nu, const BlockScheme& blocks,
                      std::size_t k_begin, std::size_t k_end, Emit&& emit) {
    // k indices here are 0-based: block index k+1.
    std::int64_t n = blocks.b(static_cast<std::int64_t>(k_begin) + 1);
    auto cursor = a.cursor(n);
    NuSource nus(nu);
    for (std::size_t k = k_begin; k < k_end; ++k) {
        std::int64_t stop = blocks.b(static_cast<std::int64_t>(k) + 2);
        cd acc{};
        for (; n < stop; ++n) acc += term(cursor->next(), nus(n));
        emit(acc);
    }
}

}  // namespace

BlockScheme BlockScheme::from_list(std::vector<std::int64_t> boundaries, std::string descriptor) {
    if (boundaries.empty() || boundaries.front() != 1) throw ParameterError("block scheme must start at b_1 = 1");
    for (std::size_t i = 1; i < boundaries.size(); ++i)
        if (boundaries[i] <= boundaries[i - 1]) throw ParameterError("block boundaries must strictly increase");
    BlockScheme s;
    s.b_ = std::move(boundaries);
    s.descriptor_ = std::move(descriptor);
    return s;
}

BlockScheme BlockScheme::power(double theta, std::int64_t offset, std::int64_t until) {
    if (!(theta > 0.0)) throw ParameterError("power gap rule needs theta > 0");
    if (offset < 0) throw ParameterError("power gap rule needs offset >= 0");
    auto b = generate(until, [&](std::int64_t k) { return floor_power(k, theta) + offset; });
    std::string desc = theta == 0.5 && offset == 1 ? "sqrt" : "pow:" + std::to_string(theta) + ":" + std::to_string(offset);
    return from_list(std::move(b), desc);
}

BlockScheme BlockScheme::log_squared(std::int64_t until) {
    auto b = generate(until, [](std::int64_t k) {
        double l = std::log(static_cast<double>(k));
        return static_cast<std::int64_t>(std::floor(l * l)) + 1;
    });
    return from_list(std::move(b), "log2");
}

BlockScheme BlockScheme::parse(std::string_view descriptor, std::int64_t until) {
    if (descriptor == "sqrt") return power(0.5, 1, until);
    if (descriptor == "log2") return log_squared(until);
    if (descriptor.starts_with("pow:")) {
        std::string_view rest = descriptor.substr(4);
        auto colon = rest.find(':');
        double theta = parse_double(rest.substr(0, colon), "block scheme");
        std::int64_t offset = 0;
        if (colon != std::string_view::npos) offset = static_cast<std::int64_t>(parse_double(rest.substr(colon + 1), "block scheme"));
        auto s = power(theta, offset, until);
        s.descriptor_ = std::string(descriptor);
        return s;
    }
    if (descriptor.starts_with("list:")) {
        std::vector<std::int64_t> b;
        std::string_view rest = descriptor.substr(5);
        while (!rest.empty()) {
            auto comma = rest.find(',');
            std::string_view item = rest.substr(0, comma);
            std::int64_t v = 0;
            auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
            if (ec != std::errc{} || ptr != item.data() + item.size())
                throw ConfigError("bad boundary '" + std::string(item) + "' in block list");
            b.push_back(v);
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
        try {
            return from_list(std::move(b), std::string(descriptor));
        } catch (const ParameterError& e) {
            throw ConfigError(e.what());
        }
    }
    throw ConfigError("unknown block scheme '" + std::string(descriptor) + "' (expected sqrt, log2, pow:θ[:c] or list:...)");
}

std::int64_t BlockScheme::blocks_ending_by(std::int64_t limit) const {
    auto it = std::upper_bound(b_.begin(), b_.end(), limit);
    std::int64_t count = it - b_.begin();  // boundaries ≤ limit
    return std::max<std::int64_t>(0, count - 1);
}

std::int64_t BlockScheme::block_of(std::int64_t n) const {
    if (n < 1) return 0;
    auto it = std::upper_bound(b_.begin(), b_.end(), n);
    return it - b_.begin();
}

ShortIntervalGrid::ShortIntervalGrid(std::vector<std::pair<std::int64_t, std::int64_t>> points)
    : points_(std::move(points)) {
    for (std::size_t i = 0; i < points_.size(); ++i) {
        auto [M, H] = points_[i];
        if (H < 1 || H > M) throw ParameterError("grid point needs 1 <= H <= M");
        if (i > 0) {
            auto [M0, H0] = points_[i - 1];
            if (H < H0) throw ParameterError("grid H must be nondecreasing");
            // H/M < H0/M0 without rounding
            if (static_cast<__int128>(H) * M0 >= static_cast<__int128>(H0) * M)
                throw ParameterError("grid ratio H/M must strictly decrease");
        }
    }
}

ShortIntervalGrid ShortIntervalGrid::cube_root(const std::vector<std::int64_t>& Ms) {
    std::vector<std::pair<std::int64_t, std::int64_t>> pts;
    for (std::int64_t M : Ms) pts.emplace_back(M, icbrt(M));
    return ShortIntervalGrid(std::move(pts));
}

std::int64_t icbrt(std::int64_t x) {
    if (x < 0) throw DomainError("icbrt needs x >= 0");
    auto r = static_cast<std::int64_t>(std::cbrt(static_cast<double>(x)));
    auto cube = [](std::int64_t v) { return static_cast<__int128>(v) * v * v; };
    while (r > 0 && cube(r) > x) --r;
    while (cube(r + 1) <= x) ++r;
    return r;
}

std::complex<double> basic_average(const PhaseSequence& a, const MultiplicativeSpec& nu, std::int64_t N,
                                   unsigned workers) {
    if (N < 1) throw ParameterError("basic_average needs N >= 1");
    constexpr std::size_t kChunksPerUnit = 64;
    cd total = chunked_sum<cd>(static_cast<std::size_t>(N), workers, kChunksPerUnit,
                               [&](std::size_t begin, std::size_t end, std::span<cd> out) {
                                   auto n = static_cast<std::int64_t>(begin) + 1;
                                   auto cursor = a.cursor(n);
                                   NuSource nus(nu);
                                   fill_chunk_sums(begin, end, out, [&] {
                                       cd v = term(cursor->next(), nus(n));
                                       ++n;
                                       return v;
                                   });
                               });
    return total / static_cast<double>(N);
}

std::complex<double> kbsz_correlation(const Orbit& a, std::int64_t r, std::int64_t s, std::int64_t N,
                                      unsigned workers) {
    if (r < 1 || s < 1) throw ParameterError("kbsz_correlation needs r, s >= 1");
    if (r == s) throw ParameterError("kbsz_correlation needs r != s");
    if (N < 1) throw ParameterError("kbsz_correlation needs N >= 1");
    const Orbit ar = a.strided(static_cast<std::uint64_t>(r));
    const Orbit as = a.strided(static_cast<std::uint64_t>(s));
    constexpr std::size_t kChunksPerUnit = 64;
    cd total = chunked_sum<cd>(static_cast<std::size_t>(N), workers, kChunksPerUnit,
                               [&](std::size_t begin, std::size_t end, std::span<cd> out) {
                                   auto n0 = static_cast<std::int64_t>(begin) + 1;
                                   auto cr = ar.cursor(n0);
                                   auto cs = as.cursor(n0);
                                   fill_chunk_sums(begin, end, out, [&] {
                                       Frac64 diff = cr->next() - cs->next();
                                       return diff.phase();
                                   });
                               });
    return total / static_cast<double>(N);
}

std::vector<std::complex<double>> block_sums(const PhaseSequence& a, const MultiplicativeSpec& nu,
                                             const BlockScheme& blocks, std::int64_t K, unsigned workers) {
    check_K(blocks, K);
    auto count = static_cast<std::size_t>(K);
    std::vector<cd> sums(count);
    std::size_t units = (count + kChunk - 1) / kChunk;
    parallel_units(units, workers, [&](std::size_t u) {
        std::size_t k0 = u * kChunk;
        std::size_t k1 = std::min(count, k0 + kChunk);
        std::size_t k = k0;
        for_block_ranges(a, nu, blocks, k0, k1, [&](cd v) { sums[k++] = v; });
    });
    return sums;
}

double weighted_block_stat(const PhaseSequence& a, const MultiplicativeSpec& nu, const BlockScheme& blocks,
                           std::int64_t K, unsigned workers) {
    check_K(blocks, K);
    double total = chunked_sum<double>(static_cast<std::size_t>(K), workers, 1,
                                       [&](std::size_t k0, std::size_t k1, std::span<double> out) {
                                           double acc = 0.0;
                                           for_block_ranges(a, nu, blocks, k0, k1, [&](cd v) { acc += std::abs(v); });
                                           out[0] = acc;
                                       });
    return total / static_cast<double>(blocks.b(K + 1));
}

std::complex<double> signed_block_average(const PhaseSequence& a, const MultiplicativeSpec& nu,
                                          const BlockScheme& blocks, std::int64_t K, unsigned workers) {
    check_K(blocks, K);
    cd total = chunked_sum<cd>(static_cast<std::size_t>(K), workers, 1,
                               [&](std::size_t k0, std::size_t k1, std::span<cd> out) {
                                   cd acc{};
                                   for_block_ranges(a, nu, blocks, k0, k1, [&](cd v) { acc += v; });
                                   out[0] = acc;
                               });
    return total / static_cast<double>(blocks.b(K + 1));
}

double short_interval_stat(const PhaseSequence& a, const MultiplicativeSpec& nu, std::int64_t M, std::int64_t H,
                           const ShortIntervalOptions& opts) {
    if (H < 1) throw ParameterError("short_interval_stat needs H >= 1");
    if (H > M) throw ParameterError("short_interval_stat needs H <= M");
    if (opts.refresh < 1) throw ParameterError("refresh interval must be >= 1");
    const auto count = static_cast<std::size_t>(M);
    const auto unit_len = static_cast<std::size_t>(opts.refresh);
    const auto h = static_cast<std::size_t>(H);
    const double inv_h = 1.0 / static_cast<double>(H);
    std::vector<double> values(count);
    std::size_t units = (count + unit_len - 1) / unit_len;
    parallel_units(units, opts.workers, [&](std::size_t u) {
        std::size_t i0 = u * unit_len;
        std::size_t i1 = std::min(count, i0 + unit_len);
        std::int64_t m0 = M + static_cast<std::int64_t>(i0);
        auto cursor = a.cursor(m0);
        NuSource nus(nu, std::min<std::size_t>(std::size_t{1} << 16, i1 - i0 + h));
        std::vector<cd> ring(h);
        std::int64_t n = m0;
        cd window{};
        for (std::size_t j = 0; j < h; ++j, ++n) {
            ring[j] = term(cursor->next(), nus(n));
            window += ring[j];
        }
        values[i0] = std::abs(window) * inv_h;
        std::size_t slot = 0;  // ring slot holding the term for n - H
        for (std::size_t i = i0 + 1; i < i1; ++i, ++n) {
            cd entering = term(cursor->next(), nus(n));
            window += entering - ring[slot];
            ring[slot] = entering;
            slot = slot + 1 == h ? 0 : slot + 1;
            values[i] = std::abs(window) * inv_h;
        }
    });
    double total = chunked_sum<double>(count, 1, (count + kChunk - 1) / kChunk + 1,
                                       [&](std::size_t begin, std::size_t end, std::span<double> out) {
                                           std::size_t i = begin;
                                           fill_chunk_sums(begin, end, out, [&] { return values[i++]; });
                                       });
    return total / static_cast<double>(M);
}

double short_interval_stat(const PolySpec& poly, const MultiplicativeSpec& nu, std::int64_t M, std::int64_t H,
                           const ShortIntervalOptions& opts) {
    return short_interval_stat(make_orbit(poly), nu, M, H, opts);
}

BlockScheme hx_blocks(const ShortIntervalGrid& grid, const std::vector<std::int64_t>& residues) {
    const auto& pts = grid.points();
    if (residues.size() != pts.size())
        throw ParameterError("hx_blocks needs one residue per grid point");
    std::vector<std::int64_t> b{1};
    for (std::size_t l = 0; l < pts.size(); ++l) {
        auto [M, H] = pts[l];
        std::int64_t r = residues[l];
        if (r < 0 || r >= H) throw ParameterError("residue r_l must lie in [0, H_l)");
        if (l > 0) {
            auto [M0, H0] = pts[l - 1];
            if (M <= 2 * M0 + H0) throw ParameterError("grid groups overlap: need M_{l+1} > 2 M_l + H_l");
        }
        std::int64_t first = M + ((r - M % H) % H + H) % H;
        for (std::int64_t m = first; m < 2 * M + H; m += H)
            if (m > b.back()) b.push_back(m);
    }
    return BlockScheme::from_list(std::move(b), "hx");
}

}  // namespace torusmu
