#ifndef FDS_TOWER_HPP
#define FDS_TOWER_HPP

#include "fds/mpoly.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace fds {

class Tower;
using TowerPtr = std::shared_ptr<const Tower>;

enum class Var { X, Y };

// Element of a differential field tower: a normalized fraction of multivariate
// polynomials in the tower's generators. Invariants after construction:
//   - powers of algebraic generators are reduced below their minimal degree,
//   - the denominator is free of algebraic generators,
//   - numerator and denominator are coprime, denominator has leading coeff 1.
class DElement {
public:
    DElement() = default; // detached zero; usable only as a placeholder

    const MPoly& num() const { return num_; }
    const MPoly& den() const { return den_; }
    const TowerPtr& tower() const { return tower_; }

    bool valid() const { return tower_ != nullptr; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return den_ == MPoly(Rat(1)) && num_ == MPoly(Rat(1)); }
    bool is_rational() const { return num_.is_constant() && den_.is_constant(); }
    Rat rational_value() const { return num_.constant_value() / den_.constant_value(); }

    bool base_only() const { return num_.max_var() <= 1 && den_.max_var() <= 1; }

    DElement operator-() const;
    friend DElement operator+(const DElement& a, const DElement& b);
    friend DElement operator-(const DElement& a, const DElement& b);
    friend DElement operator*(const DElement& a, const DElement& b);
    friend DElement operator/(const DElement& a, const DElement& b);
    DElement& operator+=(const DElement& o) { return *this = *this + o; }
    DElement& operator-=(const DElement& o) { return *this = *this - o; }
    DElement& operator*=(const DElement& o) { return *this = *this * o; }
    DElement& operator/=(const DElement& o) { return *this = *this / o; }

    bool operator==(const DElement& o) const;
    bool operator!=(const DElement& o) const { return !(*this == o); }

    DElement inverse() const;
    DElement pow(int e) const;

    DElement derive(Var v) const;

    // Reinterpret in a tower that extends this element's tower.
    DElement lift(const TowerPtr& bigger) const;

    std::string str() const;

private:
    friend class Tower;
    TowerPtr tower_;
    MPoly num_, den_{Rat(1)};
};

struct Gen {
    enum Kind { Base, Algebraic, Differential, CharJet, FreeJet };
    Kind kind = Base;
    std::string name;
    uint64_t serial = 0;
    // Derivative values as elements of the owning tower; unset means the
    // derivative falls off the precomputed jet table.
    std::optional<DElement> dx, dy;
    // Algebraic: monic minimal polynomial z^d + sum c_i z^i, coefficients
    // free of this generator.
    std::vector<DElement> minpoly;
    // Jet bookkeeping: index of the family's first generator and the jet
    // offsets of this one.
    size_t family_base = 0;
    int jet_l = 0, jet_r = 0;
};

class Tower : public std::enable_shared_from_this<Tower> {
public:
    static TowerPtr base(); // Q(x,y) with d_x x = d_y y = 1

    size_t size() const { return gens_.size(); }
    const Gen& gen(size_t i) const { return gens_[i]; }
    int find(const std::string& name) const;
    std::vector<std::string> names() const;

    DElement element(MPoly num, MPoly den = MPoly(Rat(1))) const;
    DElement constant(const Rat& c) const { return element(MPoly(c)); }
    DElement gen_element(size_t i) const { return element(MPoly::var(unsigned(i))); }
    DElement x() const { return gen_element(0); }
    DElement y() const { return gen_element(1); }

    bool extends(const Tower& other) const; // other is a prefix of this
    static TowerPtr common(const TowerPtr& a, const TowerPtr& b);

    struct Adjoined {
        TowerPtr tower;
        DElement elem; // the new generator (first jet for jet families)
        size_t index;  // generator index of elem
    };

    // Monic minimal polynomial given by coefficients c_0..c_{d-1} (elements of
    // this tower). Degree 1 returns -c_0 without extending.
    Adjoined adjoin_algebraic(const std::string& name,
                              const std::vector<DElement>& minpoly_coeffs) const;

    Adjoined adjoin_differential(const std::string& name, const DElement& dxv,
                                 const DElement& dyv) const;

    // Characteristic jet family for w with
    //   orient Y:  d_x w = c1 * d_y w + c2 * w + c3   (jets are d_y^k w)
    //   orient X:  d_y w = c1 * d_x w + c2 * w + c3   (jets are d_x^k w)
    Adjoined adjoin_char_jet(const std::string& name, const DElement& c1,
                             const DElement& c2, const DElement& c3, Var orient,
                             int depth) const;

    // Free jet family: independent generators d_x^l d_y^r w for l + r <= depth.
    Adjoined adjoin_free_jet(const std::string& name, int depth) const;

    // Generator element d_x^l d_y^r w for a free-jet family rooted at base_idx.
    DElement free_jet(size_t base_idx, int l, int r) const;
    // Jet d^k w of a characteristic-jet family rooted at base_idx.
    DElement char_jet(size_t base_idx, int k) const;

    // Square root within the tower, if one exists (algebraic generators of
    // degree 2 are used; higher-degree generators are not searched).
    std::optional<DElement> try_sqrt(const DElement& e) const;

    std::string describe() const;

private:
    friend class DElement;
    Tower() = default;

    DElement make(MPoly num, MPoly den) const;
    // Reduce powers of algebraic generators; returns an equivalent fraction.
    void reduce_alg(MPoly& num, MPoly& den) const;
    // 1/p for nonzero p, result denominator free of algebraic generators.
    DElement invert_poly(const MPoly& p) const;
    DElement poly_derive(const MPoly& p, Var v) const;
    const DElement& gen_derivative(size_t i, Var v) const;
    int top_alg_gen(const MPoly& p) const;

    std::vector<Gen> gens_;
    TowerPtr parent_;
};

inline DElement operator*(const DElement& a, const Rat& c) {
    return a * a.tower()->constant(c);
}
inline DElement operator*(const Rat& c, const DElement& a) { return a * c; }
inline DElement operator/(const DElement& a, const Rat& c) {
    return a / a.tower()->constant(c);
}
inline DElement operator+(const DElement& a, const Rat& c) {
    return a + a.tower()->constant(c);
}
inline DElement operator-(const DElement& a, const Rat& c) {
    return a - a.tower()->constant(c);
}

} // namespace fds

#endif
