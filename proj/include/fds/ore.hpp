#ifndef FDS_ORE_HPP
#define FDS_ORE_HPP

#include "fds/skew.hpp"

namespace fds {

// Left form of the right fraction p·b^{-1}: b̄·p = p̄·b with b̄ ∈ F[d_y] nonzero.
struct OreSwapLeft {
    SkewPoly bbar;
    LPDO pbar;
};
OreSwapLeft ore_swap(const LPDO& p, const SkewPoly& b);

// Right form of the left fraction b^{-1}·p: b·p2 = p·b2 with b2 ∈ F[d_y] nonzero.
struct OreSwapRight {
    LPDO p2;
    SkewPoly b2;
};
OreSwapRight ore_swap_right(const SkewPoly& b, const LPDO& p);

// Element of R = F[d_x,d_y](F[d_y])^{-1} kept in right form p·b^{-1}.
class OreFraction {
public:
    OreFraction(LPDO p, SkewPoly b);
    static OreFraction from_lpdo(const LPDO& p);

    const LPDO& num() const { return p_; }
    const SkewPoly& den() const { return b_; }
    const TowerPtr& tower() const { return p_.tower(); }
    bool is_zero() const { return p_.is_zero(); }

    // Left-fraction normal form sum c_i d_x^i over the skew field of F[d_y].
    DxPoly value() const;
    // Cached left form (b̄, p̄) with b̄·p = p̄·b.
    const OreSwapLeft& left_form() const;

    friend OreFraction operator+(const OreFraction& a, const OreFraction& b);
    friend OreFraction operator*(const OreFraction& a, const OreFraction& b);
    OreFraction operator-() const { return OreFraction(-p_, b_); }
    friend OreFraction operator-(const OreFraction& a, const OreFraction& b) { return a + (-b); }
    bool operator==(const OreFraction& o) const { return value() == o.value(); }
    bool operator!=(const OreFraction& o) const { return !(*this == o); }

    std::string str() const;

private:
    LPDO p_;
    SkewPoly b_;
    mutable std::shared_ptr<OreSwapLeft> left_;
};

// Eq. (4) membership witness: p̄·gcd = b̄·generator.
struct LeftGcdWitness {
    LPDO generator;
    SkewPoly bbar;
    LPDO pbar;
};

struct LeftGcdResult {
    LPDO gcd; // cleared to F[d_x,d_y], content removed
    std::vector<LeftGcdWitness> member;
    // Representation witness: b̄·gcd = sum p̄_j·generator_j.
    SkewPoly bezout_b;
    std::vector<LPDO> bezout_p;
    bool verified = false; // all witnesses re-multiplied exactly
};
LeftGcdResult left_gcd(const std::vector<LPDO>& gens);

// gcd of the symbols as homogeneous polynomials in ξ, η and its degree
// e = deg g (the typical differential dimension).
struct SymbolGcd {
    Symbol g;
    unsigned e = 0;
};
SymbolGcd symbol_gcd(const std::vector<LPDO>& gens);

} // namespace fds

#endif
