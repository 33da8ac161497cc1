// src/arith.cpp
#include "torusmu/arith.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "torusmu/errors.hpp"
#include "torusmu/frac64.hpp"
#include "torusmu/reduce.hpp"

namespace torusmu {

namespace {

constexpr double kModulusSlack = 1.0 + 0x1p-30;

std::uint64_t isqrt(std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

bool is_prime_slow(std::uint64_t p) {
    if (p < 2) return false;
    for (std::uint64_t q = 2; q * q <= p; ++q)
        if (p % q == 0) return false;
    return true;
}

std::size_t checked_length(std::int64_t lo, std::int64_t hi, std::size_t capacity) {
    if (lo < 1) throw DomainError("sieve range must start at n >= 1, got lo=" + std::to_string(lo));
    if (hi <= lo)
        throw DomainError("empty sieve range [" + std::to_string(lo) + "," + std::to_string(hi) + ")");
    auto len = static_cast<std::uint64_t>(hi - lo);
    if (len > capacity)
        throw CapacityError("range of " + std::to_string(len) + " entries exceeds segment capacity " +
                            std::to_string(capacity));
    return static_cast<std::size_t>(len);
}

std::uint64_t first_multiple(std::uint64_t lo, std::uint64_t p) { return (lo + p - 1) / p * p; }

/// Generic prime-power peeling: calls visit(i, p, e) for every prime power
/// p^e exactly dividing lo + i, including the large leftover prime.
template <class Visit>
void peel_factors(std::int64_t lo, std::size_t len, Visit&& visit) {
    auto ulo = static_cast<std::uint64_t>(lo);
    std::uint64_t uhi = ulo + len;
    std::vector<std::uint64_t> rem(len);
    std::iota(rem.begin(), rem.end(), ulo);
    for (std::uint64_t p : primes_up_to(isqrt(uhi - 1))) {
        for (std::uint64_t n = first_multiple(ulo, p); n < uhi; n += p) {
            std::size_t i = n - ulo;
            std::uint64_t r = rem[i];
            unsigned e = 0;
            do {
                r /= p;
                ++e;
            } while (r % p == 0);
            rem[i] = r;
            visit(i, p, e);
        }
    }
    for (std::size_t i = 0; i < len; ++i)
        if (rem[i] > 1) visit(i, rem[i], 1u);
}

}  // namespace

MultiplicativeSpec MultiplicativeSpec::archimedean(double t) {
    if (!std::isfinite(t)) throw SpecError("archimedean character needs a finite t");
    MultiplicativeSpec s(Kind::Archimedean);
    s.t_ = t;
    return s;
}

MultiplicativeSpec MultiplicativeSpec::custom(PrimePowerTable table) {
    for (const auto& [key, v] : table) {
        auto [p, e] = key;
        if (e == 0 || !is_prime_slow(p))
            throw SpecError("custom table key (" + std::to_string(p) + "," + std::to_string(e) +
                            ") is not a prime power");
        if (!(std::abs(v) <= kModulusSlack))
            throw SpecError("custom value at " + std::to_string(p) + "^" + std::to_string(e) +
                            " has modulus above 1");
    }
    MultiplicativeSpec s(Kind::Custom);
    s.table_ = std::make_shared<const PrimePowerTable>(std::move(table));
    return s;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

MultiplicativeSpec MultiplicativeSpec::random_unimodular(std::uint64_t seed) {
    MultiplicativeSpec s(Kind::Random);
    s.seed_ = seed;
    return s;
}

cplx MultiplicativeSpec::prime_power(std::uint64_t p, unsigned e) const {
    switch (kind_) {
        case Kind::Moebius:
            return e == 1 ? -1.0 : 0.0;
        case Kind::Liouville:
            return (e % 2) ? -1.0 : 1.0;
        case Kind::Archimedean:
            return std::polar(1.0, t_ * e * std::log(static_cast<double>(p)));
        case Kind::Custom: {
            auto it = table_->find({p, e});
            if (it == table_->end())
                throw SpecError("custom spec has no value for " + std::to_string(p) + "^" + std::to_string(e));
            return it->second;
        }
        case Kind::Random:
            return Frac64(splitmix64(splitmix64(splitmix64(seed_) ^ p) ^ e)).phase();
    }
    return 0.0;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
    std::vector<std::uint64_t> primes;
    if (limit < 2) return primes;
    std::vector<bool> composite(limit + 1, false);
    for (std::uint64_t p = 2; p <= limit; ++p) {
        if (composite[p]) continue;
        primes.push_back(p);
        for (std::uint64_t m = p * p; m <= limit; m += p) composite[m] = true;
    }
    return primes;
}

MoebiusSegment sieve_moebius(std::int64_t lo, std::int64_t hi, std::size_t capacity) {
    std::size_t len = checked_length(lo, hi, capacity);
    auto ulo = static_cast<std::uint64_t>(lo);
    auto uhi = static_cast<std::uint64_t>(hi);
    MoebiusSegment seg{lo, hi, std::vector<std::int8_t>(len, 1)};
    // Product of the distinct small primes seen; for squarefree n a shortfall
    // against n means exactly one prime factor above √hi.
    std::vector<std::uint64_t> prod(len, 1);
    for (std::uint64_t p : primes_up_to(isqrt(uhi - 1))) {
        for (std::uint64_t n = first_multiple(ulo, p); n < uhi; n += p) {
            std::size_t i = n - ulo;
            seg.values[i] = static_cast<std::int8_t>(-seg.values[i]);
            prod[i] *= p;
        }
        std::uint64_t pp = p * p;
        for (std::uint64_t n = first_multiple(ulo, pp); n < uhi; n += pp) seg.values[n - ulo] = 0;
    }
    for (std::size_t i = 0; i < len; ++i)
        if (prod[i] != ulo + i) seg.values[i] = static_cast<std::int8_t>(-seg.values[i]);
    return seg;
}

MoebiusSegment sieve_liouville(std::int64_t lo, std::int64_t hi, std::size_t capacity) {
    std::size_t len = checked_length(lo, hi, capacity);
    MoebiusSegment seg{lo, hi, std::vector<std::int8_t>(len, 1)};
    peel_factors(lo, len, [&](std::size_t i, std::uint64_t, unsigned e) {
        if (e % 2) seg.values[i] = static_cast<std::int8_t>(-seg.values[i]);
    });
    return seg;
}

ValueSegment eval_multiplicative(const MultiplicativeSpec& spec, std::int64_t lo, std::int64_t hi,
                                 std::size_t capacity) {
    std::size_t len = checked_length(lo, hi, capacity);
    ValueSegment out{lo, hi, {}};
    if (spec.is_integer_valued()) {
        MoebiusSegment ints = spec.kind() == MultiplicativeSpec::Kind::Moebius
                                  ? sieve_moebius(lo, hi, capacity)
                                  : sieve_liouville(lo, hi, capacity);
        out.values.assign(ints.values.begin(), ints.values.end());
        return out;
    }
    out.values.assign(len, cplx(1.0, 0.0));
    peel_factors(lo, len, [&](std::size_t i, std::uint64_t p, unsigned e) {
        out.values[i] *= spec.prime_power(p, e);
    });
    for (auto& v : out.values) {
        double m = std::abs(v);
        if (m > 1.0) v /= m;
    }
    return out;
}

std::int64_t mertens(std::int64_t N, unsigned workers, std::size_t capacity) {
    if (N < 1) throw DomainError("mertens needs N >= 1");
    auto count = static_cast<std::uint64_t>(N);
    std::size_t units = (count + capacity - 1) / capacity;
    std::vector<std::int64_t> partial(units, 0);
    parallel_units(units, workers, [&](std::size_t u) {
        std::int64_t lo = 1 + static_cast<std::int64_t>(u * capacity);
        std::int64_t hi = std::min<std::int64_t>(N + 1, lo + static_cast<std::int64_t>(capacity));
        std::int64_t s = 0;
        for (std::int8_t v : sieve_moebius(lo, hi, capacity).values) s += v;
        partial[u] = s;
    });
    return std::accumulate(partial.begin(), partial.end(), std::int64_t{0});
}

NuSource::NuSource(MultiplicativeSpec spec, std::size_t segment_length)
    : spec_(std::move(spec)), length_(segment_length) {
    if (length_ == 0) throw ParameterError("segment length must be positive");
}

const ValueSegment& NuSource::segment_for(std::int64_t n) {
    if (n >= current_.lo && n < current_.hi) return current_;
    if (n >= previous_.lo && n < previous_.hi) return previous_;
    auto len = static_cast<std::int64_t>(length_);
    std::int64_t lo = 1 + (n - 1) / len * len;
    std::int64_t hi = lo > std::numeric_limits<std::int64_t>::max() - len
                          ? std::numeric_limits<std::int64_t>::max()
                          : lo + len;
    previous_ = std::move(current_);
    current_ = eval_multiplicative(spec_, lo, hi, length_);
    return current_;
}

cplx NuSource::operator()(std::int64_t n) {
    if (n < 1) throw DomainError("multiplicative functions are defined for n >= 1");
    const ValueSegment& seg = segment_for(n);
    return seg.values[static_cast<std::size_t>(n - seg.lo)];
}

}  // namespace torusmu
