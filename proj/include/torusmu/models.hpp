// include/torusmu/models.hpp
//
// Orbit switching: y_n = Tⁿ x_k for b_k ≤ n < b_{k+1}. Each block follows
// the orbit of its own seed, entered by exact jump-ahead, so switching adds no
// arithmetic error.
#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include "torusmu/arith.hpp"
#include "torusmu/stats.hpp"
#include "torusmu/torus.hpp"

namespace torusmu {

class SwitchedOrbit final : public PhaseSequence {
public:
    /// seeds[k-1] is x_k. Missing seeds are only reported when a block that
    /// needs one is reached.
    SwitchedOrbit(AffineSkewMap map, BlockScheme blocks, std::vector<TorusPoint> seeds);

    const AffineSkewMap& map() const { return map_; }
    const BlockScheme& blocks() const { return blocks_; }
    const std::vector<TorusPoint>& seeds() const { return seeds_; }

    /// Seed x_k; throws ParameterError if absent.
    const TorusPoint& seed(std::int64_t k) const;
    /// y_n. Throws DomainError for n < 1.
    TorusPoint point_at(std::int64_t n) const;

    std::unique_ptr<PhaseCursor> cursor(std::int64_t n0) const override;
    Frac64 at(std::int64_t n) const override { return point_at(n).last(); }

private:
    AffineSkewMap map_;
    BlockScheme blocks_;
    std::vector<TorusPoint> seeds_;
};

/// e^{2πi x_d(y_n)} for n = 1..count.
std::vector<std::complex<double>> switched_stream(const SwitchedOrbit& orbit, std::int64_t count);

/// The rotation t with e^{2πi t}·B on the nonnegative real axis (0 for B = 0).
Frac64 alignment_phase(std::complex<double> block_sum);

/// Seeds x_k = base + (0, ..., 0, t_k), k = 1..K, where t_k aligns the k-th
/// block sum of the base orbit onto the nonnegative reals.
std::vector<TorusPoint> aligned_seeds(const AffineSkewMap& map, const TorusPoint& base, const BlockScheme& blocks,
                                      const MultiplicativeSpec& nu, std::int64_t K, unsigned workers = 1);

/// 2·#{k : b_k ≤ N} / N, the total-variation bound for T_*ν_N − ν_N of the
/// empirical measure of the switched sequence up to N.
double invariance_defect(const BlockScheme& blocks, std::int64_t N);

}  // namespace torusmu
