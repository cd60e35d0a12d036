#ifndef FDS_FACTOR_HPP
#define FDS_FACTOR_HPP

#include "fds/lpdo.hpp"
#include "fds/series.hpp"

#include <optional>

namespace fds {

// First-order factor L = d_x + a d_y + b with its exact certificate:
// T = cofactor ∘ L when right, T = L ∘ cofactor when left. The tower may
// extend the input's (algebraic directions are adjoined during the search).
struct FactorCandidate {
    bool right = true;
    DElement a, b;
    LPDO L, cofactor;
};

// Data of the second-order discriminant: T is normalized so that
// T = d_x^2 + 2a d_xd_y + a^2 d_y^2 + b01 d_x + b10 d_y + b00 (the leading
// unit is divided out and reported). disc = d_xa + a d_ya + a b01 - b10;
// the defining identity (-T + b00) f1 = disc * (d_yf1) for characteristics
// d_xf1 + a d_yf1 = 0 is verified in a fresh jet tower on every call.
struct Disc2Report {
    DElement a, b01, b10, b00;
    DElement disc;
    DElement unit;
};

// Throws std::domain_error unless T has order 2 and a non-separable symbol.
Disc2Report disc2(const LPDO& T);

// Second-order irreducibility: reducible iff disc == 0; in the reducible
// case a verified factorization T = factors->first ∘ factors->second is
// produced by the search restricted to the double direction.
struct Irreducible2 {
    bool reducible = false;
    Disc2Report report;
    std::optional<std::pair<LPDO, LPDO>> factors;
};
Irreducible2 irreducible2(const LPDO& T, int degree_bound = -1);

// Bounded search for first-order factors. Directions come from the symbol
// (algebraic ones are adjoined); for simple directions b is solved exactly
// (no bound applies), for multiple directions a polynomial ansatz for b of
// total degree <= degree_bound is used (default order(T) + 2). Every
// returned candidate carries a verified certificate; an empty list means
// "none within bounds".
std::vector<FactorCandidate> right_factor_search(const LPDO& T, int degree_bound = -1);

// Same via the adjoint; certificates re-verified on the original side.
std::vector<FactorCandidate> left_factor_search(const LPDO& T, int degree_bound = -1);

// Factorization tree flattened to a composition, left to right:
// factors[0] ∘ factors[1] ∘ ... == input exactly. certified_bound[i] marks
// leaves of order > 1 whose factor search was exhausted within bounds.
struct Factorization {
    std::vector<LPDO> factors;
    std::vector<bool> certified_bound;
};
Factorization factor_up_to_order3(const LPDO& T, int degree_bound = -1);

// Separable completeness data at a center: directions a_i (d_xf_i = a_i d_yf_i),
// characteristic series f_i with f_i(center) = 0, d_yf_i(center) = 1, and
// transport solutions h_i of the first-order transport equation with
// h_i(center) = 1, all truncated at total degree N.
struct SeparableData {
    std::vector<DElement> a;
    Rat x0, y0;
    std::vector<TPS> f, h;
    int order = 0;
};

// Throws std::domain_error for a non-separable symbol or an inadmissible
// center (coefficient pole or coinciding direction values).
SeparableData separable_prepare(const LPDO& T, const Rat& x0, const Rat& y0, int N);

// Constants of the van-der-Monde reconstruction: c[(k,i)] is the coefficient
// of f_i^k/k! in the specialization attached to direction i; sum is the
// reconstructed series and residual = solution - sum (exact zero expected).
struct Reconstruction {
    std::map<std::pair<int, int>, Rat> c;
    TPS sum, residual;
};
Reconstruction separable_reconstruct(const LPDO& T, const TPS& solution,
                                     const SeparableData& data, int N);

// T applied to a truncated power series (coefficients must expand at the
// series' center).
TPS tps_apply(const LPDO& T, const TPS& u);

} // namespace fds

#endif
