#ifndef FDS_LPDO_HPP
#define FDS_LPDO_HPP

#include "fds/upoly.hpp"

#include <map>

namespace fds {

// Linear partial differential operator sum c_{i,j} d_x^i d_y^j with
// coefficients in a differential field tower. Composition is noncommutative.
class LPDO {
public:
    using Support = std::map<std::pair<unsigned, unsigned>, DElement>;

    explicit LPDO(TowerPtr t) : t_(std::move(t)) {}
    static LPDO dx(const TowerPtr& t) { return monomial(t, 1, 0, t->constant(1)); }
    static LPDO dy(const TowerPtr& t) { return monomial(t, 0, 1, t->constant(1)); }
    static LPDO one(const TowerPtr& t) { return monomial(t, 0, 0, t->constant(1)); }
    static LPDO monomial(const TowerPtr& t, unsigned i, unsigned j, const DElement& c);

    const TowerPtr& tower() const { return t_; }
    const Support& coeffs() const { return c_; }
    DElement coeff(unsigned i, unsigned j) const;
    void set_coeff(unsigned i, unsigned j, const DElement& c);

    bool is_zero() const { return c_.empty(); }
    int order() const; // -1 for the zero operator
    unsigned order_dx() const;
    unsigned order_dy() const;

    LPDO operator-() const;
    friend LPDO operator+(const LPDO& a, const LPDO& b);
    friend LPDO operator-(const LPDO& a, const LPDO& b);
    friend LPDO operator*(const LPDO& a, const LPDO& b); // composition a∘b
    friend LPDO operator*(const DElement& c, const LPDO& a);
    LPDO& operator+=(const LPDO& o) { return *this = *this + o; }
    LPDO& operator-=(const LPDO& o) { return *this = *this - o; }
    LPDO& operator*=(const LPDO& o) { return *this = *this * o; }
    bool operator==(const LPDO& o) const;
    bool operator!=(const LPDO& o) const { return !(*this == o); }
    LPDO pow(unsigned e) const;

    DElement apply(const DElement& f) const;

    LPDO graded_part(unsigned p) const; // terms with i + j == p

    // Formal adjoint: c d_x^i d_y^j -> (-1)^{i+j} d_x^i d_y^j ∘ c.
    LPDO adjoint() const;

    // Substitute d_x -> a11 d_x + a12 d_y, d_y -> a21 d_x + a22 d_y with
    // rational constants (a C-linear transformation of the derivations).
    LPDO linear_transform(const Rat& a11, const Rat& a12, const Rat& a21, const Rat& a22) const;

    LPDO lift(const TowerPtr& bigger) const;

    std::string str() const;

private:
    TowerPtr t_;
    Support c_;
};

// Homogeneous symbol sum b_j ξ^j η^{p-j}; b[j] indexes the ξ-power.
struct Symbol {
    TowerPtr tower;
    std::vector<DElement> b; // size p+1
    unsigned degree() const { return b.empty() ? 0 : unsigned(b.size()) - 1; }
    bool is_zero() const;
    DElement eval(const DElement& xi, const DElement& eta) const;
    Symbol operator*(const Symbol& o) const;
    std::string str() const;
};

Symbol symbol_of(const LPDO& T);

// a1 ξ + a2 η dividing the symbol with multiplicity m.
struct LinearFactor {
    DElement a1, a2;
    unsigned mult = 0;
};

struct SymbolFactors {
    std::vector<LinearFactor> linear;
    // Residual factors irreducible over the current tower (or at least not
    // splitting by the methods available); each is a monic polynomial in
    // u = ξ/η, a candidate minimal polynomial for adjoin_algebraic, paired
    // with its multiplicity.
    std::vector<std::pair<UPoly, unsigned>> residual;
    DElement unit; // overall factor: symbol = unit * prod(linear) * prod(residual homogenized)
};

SymbolFactors symbol_linear_factors(const Symbol& s);

unsigned mult_of(const LPDO& T, const DElement& a1, const DElement& a2);

// T = S ∘ L + r with L = c(d_x + a d_y + b), c != 0, and r free of d_x.
struct DivisionResult {
    LPDO quotient, remainder;
};
DivisionResult divide_by_first_order(const LPDO& T, const LPDO& L);

} // namespace fds

#endif
