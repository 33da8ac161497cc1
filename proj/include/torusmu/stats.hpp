// include/torusmu/stats.hpp
//
// Estimators for correlations of polynomial phases with multiplicative
// functions. All outer sums use the fixed chunk/tree order of reduce.hpp, so
// every estimator returns the same bits for any worker count.
#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "torusmu/arith.hpp"
#include "torusmu/torus.hpp"

namespace torusmu {

/// Boundaries 1 = b_1 < b_2 < ... splitting N into blocks [b_k, b_{k+1}).
class BlockScheme {
public:
    /// Throws ParameterError unless b_1 = 1 and the list strictly increases.
    static BlockScheme from_list(std::vector<std::int64_t> boundaries, std::string descriptor = "list");
    /// Gaps ⌊k^θ⌋ + offset (θ > 0), generated until some boundary exceeds `until`.
    static BlockScheme power(double theta, std::int64_t offset, std::int64_t until);
    /// Gaps ⌊log² k⌋ + 1.
    static BlockScheme log_squared(std::int64_t until);
    /// Descriptors: "sqrt" (⌊√k⌋+1), "pow:THETA[:OFFSET]", "log2",
    /// "list:b1,b2,...". Throws ConfigError for anything else.
    static BlockScheme parse(std::string_view descriptor, std::int64_t until);

    const std::vector<std::int64_t>& boundaries() const { return b_; }
    /// Number of complete blocks.
    std::int64_t block_count() const { return static_cast<std::int64_t>(b_.size()) - 1; }
    /// b_k for 1 ≤ k ≤ block_count()+1.
    std::int64_t b(std::int64_t k) const { return b_.at(static_cast<std::size_t>(k - 1)); }
    /// Largest K with b_{K+1} ≤ limit (0 if none).
    std::int64_t blocks_ending_by(std::int64_t limit) const;
    /// Index k of the block containing n, or 0 if n < 1; n beyond the last
    /// boundary maps to block_count()+1.
    std::int64_t block_of(std::int64_t n) const;
    const std::string& descriptor() const { return descriptor_; }

private:
    std::vector<std::int64_t> b_;
    std::string descriptor_;
};

/// (M_ℓ, H_ℓ) points with H growing and H/M shrinking.
class ShortIntervalGrid {
public:
    /// Throws ParameterError unless 1 ≤ H ≤ M, H is nondecreasing and H/M is
    /// strictly decreasing along the grid.
    explicit ShortIntervalGrid(std::vector<std::pair<std::int64_t, std::int64_t>> points);
    /// H = ⌊M^{1/3}⌋ at each M.
    static ShortIntervalGrid cube_root(const std::vector<std::int64_t>& Ms);

    const std::vector<std::pair<std::int64_t, std::int64_t>>& points() const { return points_; }

private:
    std::vector<std::pair<std::int64_t, std::int64_t>> points_;
};

/// ⌊x^{1/3}⌋ for x ≥ 0.
std::int64_t icbrt(std::int64_t x);

/// (1/N) Σ_{n=1}^{N} a_n ν(n).
std::complex<double> basic_average(const PhaseSequence& a, const MultiplicativeSpec& nu, std::int64_t N,
                                   unsigned workers = 1);

/// (1/N) Σ_{n=1}^{N} a_{rn} · conj(a_{sn}); throws ParameterError if r == s
/// or either is < 1.
std::complex<double> kbsz_correlation(const Orbit& a, std::int64_t r, std::int64_t s, std::int64_t N,
                                      unsigned workers = 1);

/// B_k = Σ_{b_k ≤ n < b_{k+1}} a_n ν(n) for k = 1..K.
std::vector<std::complex<double>> block_sums(const PhaseSequence& a, const MultiplicativeSpec& nu,
                                             const BlockScheme& blocks, std::int64_t K, unsigned workers = 1);

/// (1/b_{K+1}) Σ_{k≤K} |B_k|. Throws ParameterError if K exceeds the scheme.
double weighted_block_stat(const PhaseSequence& a, const MultiplicativeSpec& nu, const BlockScheme& blocks,
                           std::int64_t K, unsigned workers = 1);

/// (1/b_{K+1}) Σ_{k≤K} B_k, without absolute values.
std::complex<double> signed_block_average(const PhaseSequence& a, const MultiplicativeSpec& nu,
                                          const BlockScheme& blocks, std::int64_t K, unsigned workers = 1);

struct ShortIntervalOptions {
    unsigned workers = 1;
    /// Window sums are recomputed from scratch every `refresh` slides.
    std::int64_t refresh = std::int64_t{1} << 16;
};

/// (1/M) Σ_{M ≤ m < 2M} (1/H) |Σ_{m ≤ n < m+H} a_n ν(n)|, using a sliding
/// window. Throws ParameterError unless 1 ≤ H ≤ M.
double short_interval_stat(const PhaseSequence& a, const MultiplicativeSpec& nu, std::int64_t M, std::int64_t H,
                           const ShortIntervalOptions& opts = {});
double short_interval_stat(const PolySpec& poly, const MultiplicativeSpec& nu, std::int64_t M, std::int64_t H,
                           const ShortIntervalOptions& opts = {});

/// {1} ∪ ⋃_ℓ {m : M_ℓ ≤ m < 2M_ℓ + H_ℓ, m ≡ r_ℓ mod H_ℓ}. Throws
/// ParameterError for a residue outside [0, H_ℓ) or when consecutive groups
/// overlap (M_{ℓ+1} ≤ 2M_ℓ + H_ℓ).
BlockScheme hx_blocks(const ShortIntervalGrid& grid, const std::vector<std::int64_t>& residues);

}  // namespace torusmu
