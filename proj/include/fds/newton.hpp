#ifndef FDS_NEWTON_HPP
#define FDS_NEWTON_HPP

#include "fds/fracderiv.hpp"

#include <functional>

namespace fds {

// Expansion context for one level of the §2 procedure: the tower carries a
// free-jet family for h, the already constructed f_1..f_{k-1} (with their
// exponents s_1 = 1 > s_2 > ...), and a free-jet family for the formal f_k.
struct NewtonContext {
    TowerPtr tower;
    size_t h_base = 0;
    std::vector<DElement> f;
    std::vector<Rat> s;
    size_t formal_base = 0;
    int jet_depth = 0;
};

// Adjoins the h family (named formal_name + "_h") and the formal family to
// the tower holding the f's. jet_depth must cover the order of the operator.
NewtonContext newton_context(const TowerPtr& t, const std::vector<DElement>& f,
                             const std::vector<Rat>& s, const std::string& formal_name,
                             int jet_depth);

// Polygon P_k: points (j, t) where j is the accumulated known weight and t
// the number of formal-f_k derivative factors of a term of T(hG).
struct NewtonPolygon {
    int level = 2;
    std::map<std::pair<Rat, int>, DElement> points; // nonzero coefficients
    std::vector<std::pair<Rat, int>> hull;          // max-t vertex down to the origin
    NewtonContext ctx;
    int order = 0;
};

struct LeadingEdge {
    Rat j3, j4;         // pivot (j3, t3) above, (j4, t4) below
    int t3 = 0, t4 = 0; // t3 > t4
    Rat slope;          // (j4 - j3)/(t3 - t4) >= 0 on reported edges
};

// Leading polynomial Q_k on an edge: B maps t to the coefficients of
// v1^l v2^{t-l} (v = grad f_k), h factored out. For a slope-0 edge Bbar is
// the linear operator on h read off the bottom point (j5, 0).
struct LeadingPolynomial {
    LeadingEdge edge;
    std::map<int, std::vector<DElement>> B;
    std::optional<LPDO> Bbar;
};

// Expands T(hG) at this level. Throws std::domain_error if symb(T) does not
// vanish on grad f_1 (wrong factor was chosen).
NewtonPolygon build_polygon(const LPDO& T, const NewtonContext& ctx, int level);

// Hull edges with slope in [0, max_slope), ordered by slope descending
// (slope 0, if present, comes last).
std::vector<LeadingEdge> leading_edges(const NewtonPolygon& P, const Rat& max_slope);

LeadingPolynomial leading_polynomial(const NewtonPolygon& P, const LeadingEdge& e);

// The family Bhat_t of Eq. (3) for a chosen solution f_k of Q = 0, verified
// against the re-expansion Pnext (built with f_k appended and a fresh formal
// family). t0 = min{t : Bhat_t != 0} >= 1.
struct TaylorShift {
    std::map<int, std::vector<DElement>> Bhat;
    int t0 = 0;
};
TaylorShift taylor_shift(const LeadingPolynomial& Q, const DElement& fk,
                         const NewtonPolygon& Pnext);

// Ledger of one branch of the construction tree.
struct LevelRecord {
    int level = 2;
    LeadingEdge edge;
    long q = 1;             // common denominator after this level
    int t0 = 0;             // multiplicity of f_k in Q_k
    Rat axis;               // intersection of the leading line with the j-axis
    std::string extension;  // what was adjoined to solve the leading equation
};
struct BranchTrace {
    std::vector<LevelRecord> levels;
    long q_final = 1;
    Rat final_pivot_j;      // j5 of the terminal (slope <= 0) edge
    int final_pivot_t = 0;  // t5, the generic multiplicity
};

struct SeriesOptions {
    std::optional<DElement> f1; // concrete f1; default: a characteristic jet
    // Fallback solvers for leading equations outside the built-in patterns
    // (m=1 transport, perfect-power edges); the returned element may live in
    // an extension of the passed tower and is always verified.
    std::function<DElement(const TowerPtr&, const LeadingPolynomial&)> solve_fk;
    std::function<DElement(const TowerPtr&, const LPDO&)> solve_h;
    std::vector<size_t> edge_choice; // per level, index into leading_edges; default least slope
    int tail_N = 0;                  // number of tail coefficients h_1..h_N
    int jet_depth = 4;               // >= order of T
};

struct SeriesResult {
    FracSeries series;
    BranchTrace trace;
    LPDO Bbar;   // final operator on h, in the final tower
    TowerPtr tower;
};

// Runs the §2 recursion for one linear factor of symb(T) and produces a
// truncated series (with tail_N tail coefficients) plus the branch ledger.
SeriesResult construct_series(const LPDO& T, const LinearFactor& factor,
                              const SeriesOptions& opt = {});

// Extends R.series.h with h_{i+1}..h_N solving Bbar(h_i) = fbar_i (§2).
void tail_coefficients(const LPDO& T, SeriesResult& R, int N);

std::string polygon_json(const NewtonPolygon& P);
std::string trace_json(const BranchTrace& tr);

} // namespace fds

#endif
