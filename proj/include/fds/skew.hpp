#ifndef FDS_SKEW_HPP
#define FDS_SKEW_HPP

#include "fds/lpdo.hpp"

namespace fds {

// Derivation defining a skew polynomial ring F[θ], θ∘c = c∘θ + δ(c):
//   E  : θ = d_x + a d_y, δ(c) = c_x + a c_y   (§7.2)
//   Dy : θ = d_y,         δ(c) = c_y           (§4 localization)
struct SkewDeriv {
    enum Kind { E, Dy };
    Kind kind = Dy;
    DElement a; // only for E

    static SkewDeriv mk_e(const DElement& dir) { return {E, dir}; }
    static SkewDeriv mk_dy() { return {Dy, DElement()}; }

    DElement operator()(const DElement& c) const {
        if (kind == Dy) return c.derive(Var::Y);
        return c.derive(Var::X) + a * c.derive(Var::Y);
    }
    bool compatible(const SkewDeriv& o) const {
        if (kind != o.kind) return false;
        return kind == Dy || a == o.a;
    }
};

// Univariate skew polynomial sum c_i θ^i over a tower field.
class SkewPoly {
public:
    SkewPoly(TowerPtr t, SkewDeriv d) : t_(std::move(t)), d_(std::move(d)) {}
    SkewPoly(TowerPtr t, SkewDeriv d, std::vector<DElement> cs)
        : t_(std::move(t)), d_(std::move(d)), c_(std::move(cs)) {
        for (auto& e : c_) e = e.lift(t_);
        trim();
    }
    static SkewPoly theta(const TowerPtr& t, const SkewDeriv& d) {
        return SkewPoly(t, d, {t->constant(0), t->constant(1)});
    }
    static SkewPoly constant(const TowerPtr& t, const SkewDeriv& d, const DElement& c) {
        return SkewPoly(t, d, {c});
    }

    const TowerPtr& tower() const { return t_; }
    const SkewDeriv& deriv() const { return d_; }
    int degree() const { return int(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    DElement coeff(size_t i) const { return i < c_.size() ? c_[i] : t_->constant(0); }
    const DElement& lc() const {
        if (c_.empty()) throw std::logic_error("SkewPoly::lc of zero");
        return c_.back();
    }
    void set_coeff(size_t i, const DElement& v) {
        if (i >= c_.size()) c_.resize(i + 1, t_->constant(0));
        c_[i] = v.lift(t_);
        trim();
    }

    SkewPoly operator-() const;
    friend SkewPoly operator+(const SkewPoly& a, const SkewPoly& b);
    friend SkewPoly operator-(const SkewPoly& a, const SkewPoly& b);
    friend SkewPoly operator*(const SkewPoly& a, const SkewPoly& b); // composition
    friend SkewPoly operator*(const DElement& s, const SkewPoly& a);
    bool operator==(const SkewPoly& o) const { return (*this - o).is_zero(); }
    bool operator!=(const SkewPoly& o) const { return !(*this == o); }

    SkewPoly monic() const { return is_zero() ? *this : lc().inverse() * *this; }

    // A = Q ∘ B + R (division from the right: the quotient sits left of B).
    static void right_divmod(const SkewPoly& A, const SkewPoly& B, SkewPoly& Q, SkewPoly& R);
    // A = B ∘ Q + R.
    static void left_divmod(const SkewPoly& A, const SkewPoly& B, SkewPoly& Q, SkewPoly& R);

    // Greatest common right divisor (monic) via right Euclid.
    static SkewPoly gcrd(SkewPoly a, SkewPoly b);
    // Least common left multiple: L = U∘a = V∘b, with cofactors.
    static SkewPoly lclm(const SkewPoly& a, const SkewPoly& b, SkewPoly* U = nullptr,
                         SkewPoly* V = nullptr);
    // Greatest common left divisor and least common right multiple
    // (L = a∘U = b∘V) via left Euclid.
    static SkewPoly lcrm(const SkewPoly& a, const SkewPoly& b, SkewPoly* U = nullptr,
                         SkewPoly* V = nullptr);

    // Formal adjoint sum (−θ)^i ∘ c_i; an anti-automorphism, so left-side
    // questions (gcld, lcrm, exact left quotients) reduce to right-side ones.
    SkewPoly adjoint() const;

    // As an operator in F[d_x, d_y].
    LPDO to_lpdo() const;

    std::string str(const std::string& sym = "T") const;

private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
    SkewPoly theta_compose() const; // θ ∘ (*this)
    TowerPtr t_;
    SkewDeriv d_;
    std::vector<DElement> c_;
};

// Scaling factor s such that the coefficients of s·p (p in ps) become
// polynomial with their common polynomial content removed.
DElement skew_strip_scale(const std::vector<const SkewPoly*>& ps);

// Left fraction den^{-1} ∘ num over F[d_y] (§4 skew-field of fractions).
class SkewFrac {
public:
    explicit SkewFrac(const TowerPtr& t)
        : num_(t, SkewDeriv::mk_dy()), den_(SkewPoly::constant(t, SkewDeriv::mk_dy(), t->constant(1))) {}
    SkewFrac(SkewPoly num, SkewPoly den);
    static SkewFrac from_poly(const SkewPoly& p) { return SkewFrac(p, SkewPoly::constant(p.tower(), p.deriv(), p.tower()->constant(1))); }

    const SkewPoly& num() const { return num_; }
    const SkewPoly& den() const { return den_; }
    const TowerPtr& tower() const { return num_.tower(); }
    bool is_zero() const { return num_.is_zero(); }

    SkewFrac operator-() const;
    friend SkewFrac operator+(const SkewFrac& a, const SkewFrac& b);
    friend SkewFrac operator-(const SkewFrac& a, const SkewFrac& b);
    friend SkewFrac operator*(const SkewFrac& a, const SkewFrac& b);
    bool operator==(const SkewFrac& o) const { return (*this - o).is_zero(); }
    bool operator!=(const SkewFrac& o) const { return !(*this == o); }
    SkewFrac inverse() const;

    // d_x-action: δ(b^{-1}a) = b^{-1}δ(a) − b^{-1}δ(b) b^{-1}a.
    SkewFrac dx_action() const;

    std::string str() const;

private:
    SkewPoly num_, den_; // value = den^{-1} ∘ num
};

// Element of R written sum c_i d_x^i with skew-fraction coefficients (§4).
class DxPoly {
public:
    explicit DxPoly(TowerPtr t) : t_(std::move(t)) {}
    static DxPoly from_lpdo(const LPDO& T);

    const TowerPtr& tower() const { return t_; }
    int degree() const { return int(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    SkewFrac coeff(size_t i) const { return i < c_.size() ? c_[i] : SkewFrac(t_); }
    void set_coeff(size_t i, const SkewFrac& v);

    DxPoly operator-() const;
    friend DxPoly operator+(const DxPoly& a, const DxPoly& b);
    friend DxPoly operator-(const DxPoly& a, const DxPoly& b);
    friend DxPoly operator*(const DxPoly& a, const DxPoly& b);
    friend DxPoly operator*(const SkewFrac& s, const DxPoly& a);
    bool operator==(const DxPoly& o) const { return (*this - o).is_zero(); }

    // A = Q·B + R with deg_dx R < deg_dx B.
    static void divide_dx(const DxPoly& A, const DxPoly& B, DxPoly& Q, DxPoly& R);

    // Clear coefficients to a common left denominator: returns (b, P) with
    // b ∈ F[d_y], P ∈ F[d_x,d_y] and b^{-1}P = *this.
    std::pair<SkewPoly, LPDO> clear_denominators() const;

    std::string str() const;

private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
    TowerPtr t_;
    std::vector<SkewFrac> c_;
};

} // namespace fds

#endif
