// include/torusmu/quasi.hpp
//
// Quasi-eigenfunction calculus for the skew product T. A quasi-eigenfunction
// x ↦ e^{2πi(m·x + c)} is stored symbolically as its frequency m and constant
// phase c, so W_T(f) = f∘T / f and every identity built from it reduce to
// integer and Frac64 arithmetic with no rounding at all.
#pragma once

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "torusmu/frac64.hpp"
#include "torusmu/torus.hpp"

namespace torusmu {

/// Frequency of the character χ_m(x) = e^{2πi m·x}.
struct Character {
    std::vector<std::int64_t> m;
    friend bool operator==(const Character&, const Character&) = default;
};

/// x ↦ e^{2πi(m·x + c)}.
struct QuasiEig {
    std::vector<std::int64_t> m;
    Frac64 c;

    bool is_constant() const;
    std::complex<double> operator()(const TorusPoint& x) const;

    friend bool operator==(const QuasiEig&, const QuasiEig&) = default;
    /// Pointwise product.
    friend QuasiEig operator*(const QuasiEig& f, const QuasiEig& g);
};

/// W_T f = f∘T / f = χ_{(Aᵗ-I)m} · e^{2πi m_1 α}; the constant of f cancels.
/// Throws DimensionError if dim(m) != map.dim().
QuasiEig apply_WT(const AffineSkewMap& map, const QuasiEig& f);

/// W_{T^r} f, using T^r x = A^r x + t_r with (A^r)_{ij} = C(r, i-j) and
/// (t_r)_i = C(r, i) α. Frequencies are exact integers; an overflow of the
/// 64-bit frequency throws ParameterError.
QuasiEig apply_W_power(const AffineSkewMap& map, const QuasiEig& f, std::uint64_t r);

/// f∘T^j.
QuasiEig compose(const QuasiEig& f, const AffineSkewMap& map, std::uint64_t j);

/// Least k ≥ 0 with (Aᵗ-I)^k m = 0, i.e. the level of χ_m in the tower E_k.
int ek_degree(const AffineSkewMap& map, const Character& chi);

/// Checks W_{T^r}^k f = (W_T^k f)^{r^k} exactly for k = ek_degree(f).
/// Throws ParameterError for r = 0 or when k exceeds kmax.
bool check_tr_lemma(const AffineSkewMap& map, const QuasiEig& f, std::uint64_t r, int kmax);

/// (1/N) Σ_{n<N} f(Tⁿ p0) along the exact orbit.
std::complex<double> birkhoff_average(const AffineSkewMap& map, const QuasiEig& f, const TorusPoint& p0,
                                      std::int64_t N, unsigned workers = 1);

/// All coprime (r, s) in [1, bound]² with ‖r·c1 − s·c2‖ < tol; tol = 0
/// requests exact equality r·c1 = s·c2 in Frac64.
std::vector<std::pair<std::int64_t, std::int64_t>> key_lemma_search(Frac64 c1, Frac64 c2, std::int64_t bound,
                                                                    double tol);

}  // namespace torusmu
