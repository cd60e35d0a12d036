#ifndef FDS_INTERSECT_HPP
#define FDS_INTERSECT_HPP

#include "fds/skew.hpp"

namespace fds {

// Principal ideal ⟨L⟩ with L = d_x + a d_y + b, monic in d_x.
struct FirstOrderIdeal {
    DElement a, b;
    SkewPoly generator() const; // E + b in F[E]
    LPDO lpdo() const;
};

// Generator of ⟨E+b_1⟩ ∩ ... ∩ ⟨E+b_n⟩ for a fixed direction E = d_x + a d_y,
// together with the witnesses T_j satisfying T_j ∘ (E+b_j) = Z.
struct ClassGenerator {
    DElement a;
    SkewPoly Z; // monic of degree s <= n
    std::vector<SkewPoly> witnesses;
    std::vector<DElement> b; // deduplicated inputs
    int order() const { return Z.degree(); }
};

// Rank data of a homogeneous linear system over the tower field; a full
// column rank certifies infeasibility (only the zero solution).
struct RankCertificate {
    int rows = 0, cols = 0, rank = 0;
    bool infeasible() const { return rank == cols; }
};

// Minimal-order generator of the intersection of same-symbol first-order
// ideals, found by solving the homogeneous system T_1(E+b_1) = ... =
// T_n(E+b_n) for orders s = 1, 2, ... The output is verified right-divisible
// by every E+b_j. Duplicated b's are deduplicated; the order cutoff n can
// never be hit (an internal error if it is).
ClassGenerator same_symbol_generator(const TowerPtr& t, const DElement& a,
                                     const std::vector<DElement>& bs);

// Rank data of the order-s witness system above; used to certify minimality
// (the system one order below the returned generator is infeasible).
RankCertificate class_system_rank(const TowerPtr& t, const DElement& a,
                                  const std::vector<DElement>& bs, int s);

struct PrincipalityResult {
    bool principal = false;
    LPDO Q;              // generator with ord(Q) = s when principal, else zero
    std::vector<LPDO> V; // cofactors with V_i ∘ Z_i = Q
    RankCertificate cert; // rank data of the joint homogeneous system
};

// Tests whether ⟨Z_1⟩ ∩ ... ∩ ⟨Z_l⟩ is principal for classes with pairwise
// distinct directions by searching V_i of order <= s - s_i with
// V_1 Z_1 = ... = V_l Z_l, s = sum s_i. On success ord(Q) = s exactly and
// symb(Q) is proportional to prod (ξ + a_i η)^{s_i}; both are checked.
// Throws std::invalid_argument on duplicate directions (merge them with
// same_symbol_generator first).
PrincipalityResult principality_test(const std::vector<ClassGenerator>& classes);

// Residual q_0 - (q_1 f_1 + ... + q_s f_s) of the triangular system
// expressing membership of Q in ⟨E+b⟩; zero exactly when E+b divides Q from
// the right.
DElement eq33_residual(const SkewPoly& Q, const DElement& b);

} // namespace fds

#endif
