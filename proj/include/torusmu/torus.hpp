// include/torusmu/torus.hpp
//
// The unipotent affine skew product on the d-torus
//
//   T(x_1, ..., x_d) = (x_1 + α, x_2 + x_1, ..., x_d + x_{d-1}),
//
// simulated exactly in Frac64 arithmetic. Along an orbit the last coordinate
// is Σ_j C(n, d-j) y_j with y_0 = α and y_j = x_j, so every polynomial phase
// e^{2πi P(n)} is the observable e^{2πi x_d} on a suitable orbit.
#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "torusmu/constants.hpp"
#include "torusmu/frac64.hpp"

namespace torusmu {

inline constexpr int kMaxDim = 16;

class TorusPoint {
public:
    TorusPoint() = default;
    explicit TorusPoint(int d);
    TorusPoint(std::initializer_list<Frac64> coords);
    explicit TorusPoint(std::span<const Frac64> coords);

    int dim() const { return d_; }
    /// Coordinate x_{i+1}.
    Frac64& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }
    Frac64 operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
    Frac64 last() const { return c_[static_cast<std::size_t>(d_ - 1)]; }
    std::span<const Frac64> coords() const { return {c_.data(), static_cast<std::size_t>(d_)}; }

    friend bool operator==(const TorusPoint&, const TorusPoint&) = default;

private:
    std::array<Frac64, kMaxDim> c_{};
    int d_ = 0;
};

/// T for a given dimension d and rotation α; b = (α, 0, ..., 0).
class AffineSkewMap {
public:
    AffineSkewMap(int d, Frac64 alpha);

    int dim() const { return d_; }
    Frac64 alpha() const { return alpha_; }

    friend bool operator==(const AffineSkewMap&, const AffineSkewMap&) = default;

private:
    int d_;
    Frac64 alpha_;
};

TorusPoint step(const AffineSkewMap& map, const TorusPoint& p);
TorusPoint step_inverse(const AffineSkewMap& map, const TorusPoint& p);

/// Tⁿ p, every coordinate from the binomial closed form.
TorusPoint jump(const AffineSkewMap& map, const TorusPoint& p, std::uint64_t n);

/// Last coordinate of Tⁿ p0: C(n,d)α + C(n,d-1)x_1 + ... + n·x_{d-1} + x_d.
Frac64 binomial_eval(const AffineSkewMap& map, const TorusPoint& p0, std::uint64_t n);

/// Single-consumer stream of e^{2πi x_d(n)} for n = n0, ..., n0+count-1,
/// where p0 is the orbit's state at time 0. The start is reached by exact
/// jump-ahead; afterwards the stream advances by `step`.
class PhaseStream {
public:
    PhaseStream(const AffineSkewMap& map, const TorusPoint& p0, std::int64_t n0, std::int64_t count);

    bool has_next() const { return remaining_ > 0; }
    std::int64_t index() const { return n_; }
    const TorusPoint& point() const { return state_; }

    /// x_d at the current index; advances the stream.
    Frac64 next_state();
    std::complex<double> next() { return next_state().phase(); }

private:
    AffineSkewMap map_;
    TorusPoint state_;
    std::int64_t n_;
    std::int64_t remaining_;
};

PhaseStream phase_stream(const AffineSkewMap& map, const TorusPoint& p0, std::int64_t n0, std::int64_t count);

/// Forward cursor over the phase states x(n) of some sequence.
class PhaseCursor {
public:
    virtual ~PhaseCursor() = default;
    /// State at the current index; advances by one.
    virtual Frac64 next() = 0;
};

/// A sequence n ↦ x(n) ∈ R/Z (n ≥ 0) whose terms can be reached directly.
/// Estimators consume e^{2πi x(n)} through independent cursors, one per
/// worker, so results do not depend on how a range is split.
class PhaseSequence {
public:
    virtual ~PhaseSequence() = default;
    virtual std::unique_ptr<PhaseCursor> cursor(std::int64_t n0) const = 0;
    virtual Frac64 at(std::int64_t n) const = 0;
};

/// x_d along the orbit of `origin` (the state at time 0).
class Orbit final : public PhaseSequence {
public:
    Orbit(AffineSkewMap map, TorusPoint origin);

    const AffineSkewMap& map() const { return map_; }
    const TorusPoint& origin() const { return origin_; }

    std::unique_ptr<PhaseCursor> cursor(std::int64_t n0) const override;
    Frac64 at(std::int64_t n) const override { return binomial_eval(map_, origin_, static_cast<std::uint64_t>(n)); }

    /// Orbit of the same dimension whose n-th term is this orbit's (r·n)-th
    /// term, exactly. Any sampling n ↦ x_d(rn) is again a polynomial of
    /// degree ≤ d in n, so its difference table seeds another skew product.
    Orbit strided(std::uint64_t r) const;

private:
    AffineSkewMap map_;
    TorusPoint origin_;
};

/// Real polynomial P(x) = Σ c_j x^j given by high-precision coefficients.
struct PolySpec {
    std::vector<Coefficient> coeffs;  // c_0, ..., c_d

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    /// Whether the caller's leading-coefficient token names an irrational;
    /// this is not verified numerically.
    bool leading_irrational() const { return !coeffs.empty() && coeffs.back().irrational; }

    /// Parses "c_d,...,c_0" (highest degree first). Throws SpecError.
    static PolySpec parse(std::string_view text);
    std::string to_string() const;
};

/// (α, x_1, ..., x_d) with α = Δ^d P(0), x_j = Δ^{d-j} P(0), so that
/// binomial_eval(n) = P(n) mod 1 up to the single rounding of each register.
/// Throws SpecError for a zero leading coefficient or degree outside [1, 16].
std::pair<AffineSkewMap, TorusPoint> poly_to_initial(const PolySpec& poly);

Orbit make_orbit(const PolySpec& poly);

}  // namespace torusmu
