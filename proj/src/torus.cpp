// src/torus.cpp
#include "torusmu/torus.hpp"

#include <algorithm>

#include "torusmu/errors.hpp"

namespace torusmu {

namespace {

void check_dim(int d) {
    if (d < 1 || d > kMaxDim)
        throw DimensionError("torus dimension must be in [1," + std::to_string(kMaxDim) + "], got " +
                             std::to_string(d));
}

void check_same_dim(const AffineSkewMap& map, const TorusPoint& p) {
    if (p.dim() != map.dim())
        throw DimensionError("point of dimension " + std::to_string(p.dim()) + " given to a map of dimension " +
                             std::to_string(map.dim()));
}

/// Forward differences Δ^k v(0), k = 0..size-1, in wrapping arithmetic.
template <class U>
std::vector<U> difference_column(std::vector<U> v) {
    std::vector<U> out;
    out.reserve(v.size());
    for (std::size_t len = v.size(); len > 0; --len) {
        out.push_back(v[0]);
        for (std::size_t i = 0; i + 1 < len; ++i) v[i] = v[i + 1] - v[i];
    }
    return out;
}

class OrbitCursor final : public PhaseCursor {
public:
    OrbitCursor(const AffineSkewMap& map, const TorusPoint& origin, std::int64_t n0)
        : map_(map), state_(jump(map, origin, static_cast<std::uint64_t>(n0))) {}

    Frac64 next() override {
        Frac64 x = state_.last();
        state_ = step(map_, state_);
        return x;
    }

private:
    AffineSkewMap map_;
    TorusPoint state_;
};

}  // namespace

TorusPoint::TorusPoint(int d) : d_(d) { check_dim(d); }

TorusPoint::TorusPoint(std::initializer_list<Frac64> coords)
    : TorusPoint(std::span<const Frac64>(coords.begin(), coords.size())) {}

TorusPoint::TorusPoint(std::span<const Frac64> coords) : d_(static_cast<int>(coords.size())) {
    check_dim(d_);
    std::copy(coords.begin(), coords.end(), c_.begin());
}

AffineSkewMap::AffineSkewMap(int d, Frac64 alpha) : d_(d), alpha_(alpha) { check_dim(d); }

TorusPoint step(const AffineSkewMap& map, const TorusPoint& p) {
    check_same_dim(map, p);
    TorusPoint q = p;
    for (int i = map.dim() - 1; i >= 1; --i) q[i] += p[i - 1];
    q[0] += map.alpha();
    return q;
}

TorusPoint step_inverse(const AffineSkewMap& map, const TorusPoint& p) {
    check_same_dim(map, p);
    TorusPoint q = p;
    q[0] -= map.alpha();
    for (int i = 1; i < map.dim(); ++i) q[i] -= q[i - 1];
    return q;
}

TorusPoint jump(const AffineSkewMap& map, const TorusPoint& p, std::uint64_t n) {
    check_same_dim(map, p);
    const int d = map.dim();
    std::array<std::uint64_t, kMaxDim + 1> binom{};
    for (int k = 0; k <= d; ++k) binom[static_cast<std::size_t>(k)] = binomial_mod64(n, static_cast<unsigned>(k));
    TorusPoint q(d);
    for (int i = 1; i <= d; ++i) {
        Frac64 acc = binom[static_cast<std::size_t>(i)] * map.alpha();
        for (int j = 1; j <= i; ++j) acc += binom[static_cast<std::size_t>(i - j)] * p[j - 1];
        q[i - 1] = acc;
    }
    return q;
}

Frac64 binomial_eval(const AffineSkewMap& map, const TorusPoint& p0, std::uint64_t n) {
    check_same_dim(map, p0);
    const int d = map.dim();
    Frac64 acc = binomial_mod64(n, static_cast<unsigned>(d)) * map.alpha();
    for (int j = 1; j <= d; ++j) acc += binomial_mod64(n, static_cast<unsigned>(d - j)) * p0[j - 1];
    return acc;
}

PhaseStream::PhaseStream(const AffineSkewMap& map, const TorusPoint& p0, std::int64_t n0, std::int64_t count)
    : map_(map), state_(p0), n_(n0), remaining_(count) {
    if (n0 < 0) throw DomainError("phase stream start must be >= 0");
    if (count < 0) throw ParameterError("phase stream count must be >= 0");
    state_ = jump(map, p0, static_cast<std::uint64_t>(n0));
}

Frac64 PhaseStream::next_state() {
    if (remaining_ <= 0) throw ParameterError("phase stream exhausted");
    Frac64 x = state_.last();
    state_ = step(map_, state_);
    ++n_;
    --remaining_;
    return x;
}

PhaseStream phase_stream(const AffineSkewMap& map, const TorusPoint& p0, std::int64_t n0, std::int64_t count) {
    return PhaseStream(map, p0, n0, count);
}

Orbit::Orbit(AffineSkewMap map, TorusPoint origin) : map_(map), origin_(origin) { check_same_dim(map_, origin_); }

std::unique_ptr<PhaseCursor> Orbit::cursor(std::int64_t n0) const {
    if (n0 < 0) throw DomainError("orbit cursor start must be >= 0");
    return std::make_unique<OrbitCursor>(map_, origin_, n0);
}

Orbit Orbit::strided(std::uint64_t r) const {
    if (r == 0) throw ParameterError("stride must be >= 1");
    const int d = map_.dim();
    std::vector<std::uint64_t> samples;
    for (int i = 0; i <= d; ++i) samples.push_back(binomial_eval(map_, origin_, r * static_cast<std::uint64_t>(i)).raw);
    std::vector<std::uint64_t> diffs = difference_column(std::move(samples));
    TorusPoint start(d);
    for (int j = 1; j <= d; ++j) start[j - 1] = Frac64(diffs[static_cast<std::size_t>(d - j)]);
    return Orbit(AffineSkewMap(d, Frac64(diffs[static_cast<std::size_t>(d)])), start);
}

PolySpec PolySpec::parse(std::string_view text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char ch : text) {
        if (ch == ',') {
            tokens.push_back(cur);
            cur.clear();
        } else if (ch != ' ' && ch != '\t') {
            cur.push_back(ch);
        }
    }
    tokens.push_back(cur);
    PolySpec poly;
    for (auto it = tokens.rbegin(); it != tokens.rend(); ++it) poly.coeffs.push_back(resolve_coefficient(*it));
    return poly;
}

std::string PolySpec::to_string() const {
    std::string out;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        if (!out.empty()) out += ',';
        out += it->token;
    }
    return out;
}

std::pair<AffineSkewMap, TorusPoint> poly_to_initial(const PolySpec& poly) {
    const int d = poly.degree();
    if (d < 1 || d > kMaxDim)
        throw SpecError("polynomial degree must be in [1," + std::to_string(kMaxDim) + "], got " + std::to_string(d));
    if (poly.coeffs.back().zero) throw SpecError("leading coefficient is zero");
    // P(i) mod 1 for i = 0..d at 128 fractional bits; integer powers act
    // exactly on values mod 1.
    std::vector<u128> values;
    for (int i = 0; i <= d; ++i) {
        u128 acc = 0;
        u128 power = 1;
        for (const Coefficient& c : poly.coeffs) {
            acc += power * c.frac;
            power *= static_cast<u128>(i);
        }
        values.push_back(acc);
    }
    std::vector<u128> diffs = difference_column(std::move(values));
    TorusPoint start(d);
    for (int j = 1; j <= d; ++j) start[j - 1] = Frac64::from_frac128(diffs[static_cast<std::size_t>(d - j)]);
    return {AffineSkewMap(d, Frac64::from_frac128(diffs[static_cast<std::size_t>(d)])), start};
}

Orbit make_orbit(const PolySpec& poly) {
    auto [map, start] = poly_to_initial(poly);
    return Orbit(map, start);
}

}  // namespace torusmu
