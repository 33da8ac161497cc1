// src/models.cpp
#include "torusmu/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "torusmu/errors.hpp"

namespace torusmu {

namespace {

class SwitchedCursor final : public PhaseCursor {
public:
    SwitchedCursor(const SwitchedOrbit& orbit, std::int64_t n0) : orbit_(orbit), n_(n0) {
        k_ = orbit_.blocks().block_of(n_);
        enter_block();
    }

    Frac64 next() override {
        if (n_ == next_boundary_) {
            ++k_;
            enter_block();
        }
        Frac64 x = state_.last();
        state_ = step(orbit_.map(), state_);
        ++n_;
        return x;
    }

private:
    void enter_block() {
        state_ = jump(orbit_.map(), orbit_.seed(k_), static_cast<std::uint64_t>(n_));
        next_boundary_ = k_ < orbit_.blocks().block_count() + 1 ? orbit_.blocks().b(k_ + 1)
                                                                : std::numeric_limits<std::int64_t>::max();
    }

    const SwitchedOrbit& orbit_;
    std::int64_t n_;
    std::int64_t k_ = 0;
    std::int64_t next_boundary_ = 0;
    TorusPoint state_;
};

}  // namespace

SwitchedOrbit::SwitchedOrbit(AffineSkewMap map, BlockScheme blocks, std::vector<TorusPoint> seeds)
    : map_(map), blocks_(std::move(blocks)), seeds_(std::move(seeds)) {
    for (const auto& s : seeds_)
        if (s.dim() != map_.dim()) throw DimensionError("seed dimension differs from the map dimension");
}

const TorusPoint& SwitchedOrbit::seed(std::int64_t k) const {
    if (k < 1 || k > static_cast<std::int64_t>(seeds_.size()))
        throw ParameterError("missing seed for block " + std::to_string(k) + " (have " +
                             std::to_string(seeds_.size()) + ")");
    return seeds_[static_cast<std::size_t>(k - 1)];
}

TorusPoint SwitchedOrbit::point_at(std::int64_t n) const {
    if (n < 1) throw DomainError("switched orbit is indexed from n = 1");
    return jump(map_, seed(blocks_.block_of(n)), static_cast<std::uint64_t>(n));
}

std::unique_ptr<PhaseCursor> SwitchedOrbit::cursor(std::int64_t n0) const {
    if (n0 < 1) throw DomainError("switched orbit is indexed from n = 1");
    return std::make_unique<SwitchedCursor>(*this, n0);
}

std::vector<std::complex<double>> switched_stream(const SwitchedOrbit& orbit, std::int64_t count) {
    if (count < 0) throw ParameterError("count must be >= 0");
    std::vector<std::complex<double>> out;
    out.reserve(static_cast<std::size_t>(count));
    if (count == 0) return out;
    auto cursor = orbit.cursor(1);
    for (std::int64_t i = 0; i < count; ++i) out.push_back(cursor->next().phase());
    return out;
}

Frac64 alignment_phase(std::complex<double> block_sum) {
    if (block_sum == std::complex<double>(0.0, 0.0)) return Frac64(0);
    return Frac64::from_double(-std::arg(block_sum) / (2.0 * std::numbers::pi));
}

std::vector<TorusPoint> aligned_seeds(const AffineSkewMap& map, const TorusPoint& base, const BlockScheme& blocks,
                                      const MultiplicativeSpec& nu, std::int64_t K, unsigned workers) {
    auto sums = block_sums(Orbit(map, base), nu, blocks, K, workers);
    std::vector<TorusPoint> seeds;
    seeds.reserve(sums.size());
    for (const auto& s : sums) {
        TorusPoint x = base;
        x[x.dim() - 1] += alignment_phase(s);
        seeds.push_back(x);
    }
    return seeds;
}

double invariance_defect(const BlockScheme& blocks, std::int64_t N) {
    if (N < 1) throw ParameterError("invariance_defect needs N >= 1");
    const auto& b = blocks.boundaries();
    auto boundaries_seen = std::upper_bound(b.begin(), b.end(), N) - b.begin();
    return 2.0 * static_cast<double>(boundaries_seen) / static_cast<double>(N);
}

}  // namespace torusmu
