// include/torusmu/arith.hpp
//
// Segmented evaluation of bounded multiplicative functions ν: N → C, |ν| ≤ 1.
// Every value is assembled from prime-power values: inside a segment [lo, hi)
// each base prime p ≤ √hi is peeled off its multiples, and whatever cofactor
// remains is a single prime above √hi.
#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace torusmu {

using cplx = std::complex<double>;

inline constexpr std::size_t kDefaultSegmentCapacity = std::size_t{1} << 22;

/// Half-open range [lo, hi) of values of an arithmetic function.
template <class V>
struct SieveSegment {
    std::int64_t lo = 1;
    std::int64_t hi = 1;
    std::vector<V> values;

    std::size_t size() const { return values.size(); }
    const V& at(std::int64_t n) const { return values.at(static_cast<std::size_t>(n - lo)); }
};

using MoebiusSegment = SieveSegment<std::int8_t>;
using ValueSegment = SieveSegment<cplx>;

/// Table of explicit prime-power values for custom specs, keyed by (p, e).
using PrimePowerTable = std::map<std::pair<std::uint64_t, unsigned>, cplx>;

class MultiplicativeSpec {
public:
    enum class Kind { Moebius, Liouville, Archimedean, Custom, Random };

    static MultiplicativeSpec moebius() { return MultiplicativeSpec(Kind::Moebius); }
    static MultiplicativeSpec liouville() { return MultiplicativeSpec(Kind::Liouville); }
    /// n ↦ n^{it}.
    static MultiplicativeSpec archimedean(double t);
    /// Throws SpecError when an entry has modulus above 1 + 2^-30 or p^e is
    /// not a prime power with e ≥ 1.
    static MultiplicativeSpec custom(PrimePowerTable table);
    /// Independent uniformly random unit values on every prime power. The
    /// phase of p^e is a splitmix64 hash of (seed, p, e), so a value never
    /// depends on which range is being evaluated.
    static MultiplicativeSpec random_unimodular(std::uint64_t seed);

    Kind kind() const { return kind_; }
    double t() const { return t_; }

    /// ν(p^e). Custom specs throw SpecError for a missing entry; there is no
    /// implicit completely-multiplicative extension.
    cplx prime_power(std::uint64_t p, unsigned e) const;

    /// True when every value lies in {-1, 0, 1}.
    bool is_integer_valued() const { return kind_ == Kind::Moebius || kind_ == Kind::Liouville; }

private:
    explicit MultiplicativeSpec(Kind k) : kind_(k) {}

    Kind kind_;
    double t_ = 0.0;
    std::uint64_t seed_ = 0;
    std::shared_ptr<const PrimePowerTable> table_;
};

/// Primes ≤ limit by a plain sieve of Eratosthenes.
std::vector<std::uint64_t> primes_up_to(std::uint64_t limit);

/// μ(n) for n in [lo, hi). Throws DomainError if lo < 1 or hi ≤ lo and
/// CapacityError if hi - lo exceeds `capacity`.
MoebiusSegment sieve_moebius(std::int64_t lo, std::int64_t hi,
                             std::size_t capacity = kDefaultSegmentCapacity);

/// λ(n) = (-1)^Ω(n) for n in [lo, hi).
MoebiusSegment sieve_liouville(std::int64_t lo, std::int64_t hi,
                               std::size_t capacity = kDefaultSegmentCapacity);

ValueSegment eval_multiplicative(const MultiplicativeSpec& spec, std::int64_t lo, std::int64_t hi,
                                 std::size_t capacity = kDefaultSegmentCapacity);

/// Σ_{n≤N} μ(n), sieved in capacity-sized segments.
std::int64_t mertens(std::int64_t N, unsigned workers = 1,
                     std::size_t capacity = kDefaultSegmentCapacity);

/// Point access to ν for a consumer that walks forward. Values come from
/// segments aligned to multiples of the segment length; the two most recent
/// segments stay cached so a trailing cursor a window length behind the
/// leading one never forces a re-sieve.
class NuSource {
public:
    explicit NuSource(MultiplicativeSpec spec, std::size_t segment_length = std::size_t{1} << 16);

    cplx operator()(std::int64_t n);

private:
    const ValueSegment& segment_for(std::int64_t n);

    MultiplicativeSpec spec_;
    std::size_t length_;
    ValueSegment current_;
    ValueSegment previous_;
};

}  // namespace torusmu
