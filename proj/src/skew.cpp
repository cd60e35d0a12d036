#include "fds/skew.hpp"

#include <sstream>

namespace fds {

// ---------------------------------------------------------------- SkewPoly

SkewPoly SkewPoly::operator-() const {
    SkewPoly r = *this;
    for (auto& e : r.c_) e = -e;
    return r;
}

SkewPoly operator+(const SkewPoly& a, const SkewPoly& b) {
    if (!a.d_.compatible(b.d_)) throw std::invalid_argument("SkewPoly: different derivations");
    TowerPtr t = Tower::common(a.t_, b.t_);
    SkewPoly r(t, a.d_);
    r.c_.assign(std::max(a.c_.size(), b.c_.size()), t->constant(0));
    for (size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = a.coeff(i).lift(t) + b.coeff(i).lift(t);
    r.trim();
    return r;
}

SkewPoly operator-(const SkewPoly& a, const SkewPoly& b) { return a + (-b); }

SkewPoly SkewPoly::theta_compose() const {
    SkewPoly r(t_, d_);
    r.c_.assign(c_.size() + 1, t_->constant(0));
    for (size_t i = 0; i < c_.size(); ++i) {
        r.c_[i + 1] = r.c_[i + 1] + c_[i];
        r.c_[i] = r.c_[i] + d_(c_[i]);
    }
    r.trim();
    return r;
}

SkewPoly operator*(const SkewPoly& a, const SkewPoly& b) {
    if (!a.d_.compatible(b.d_)) throw std::invalid_argument("SkewPoly: different derivations");
    TowerPtr t = Tower::common(a.t_, b.t_);
    SkewPoly r(t, a.d_);
    SkewPoly tmp(t, a.d_);
    tmp.c_ = b.c_;
    for (auto& e : tmp.c_) e = e.lift(t);
    for (size_t i = 0; i < a.c_.size(); ++i) {
        if (!a.c_[i].is_zero()) r = r + a.c_[i].lift(t) * tmp;
        if (i + 1 < a.c_.size()) tmp = tmp.theta_compose();
    }
    return r;
}

SkewPoly operator*(const DElement& s, const SkewPoly& a) {
    SkewPoly r = a;
    for (auto& e : r.c_) e = s * e;
    r.trim();
    return r;
}

void SkewPoly::right_divmod(const SkewPoly& A, const SkewPoly& B, SkewPoly& Q, SkewPoly& R) {
    if (B.is_zero()) throw std::domain_error("SkewPoly: division by zero");
    TowerPtr t = Tower::common(A.t_, B.t_);
    Q = SkewPoly(t, A.d_);
    R = A;
    DElement li = B.lc().inverse();
    while (R.degree() >= B.degree()) {
        size_t k = size_t(R.degree() - B.degree());
        DElement f = R.lc() * li;
        SkewPoly term(t, A.d_);
        term.set_coeff(k, f);
        Q = Q + term;
        R = R - term * B;
    }
}

void SkewPoly::left_divmod(const SkewPoly& A, const SkewPoly& B, SkewPoly& Q, SkewPoly& R) {
    if (B.is_zero()) throw std::domain_error("SkewPoly: division by zero");
    TowerPtr t = Tower::common(A.t_, B.t_);
    Q = SkewPoly(t, A.d_);
    R = A;
    DElement li = B.lc().inverse();
    while (R.degree() >= B.degree()) {
        size_t k = size_t(R.degree() - B.degree());
        DElement f = R.lc() * li;
        SkewPoly term(t, A.d_);
        term.set_coeff(k, f);
        Q = Q + term;
        R = R - B * term;
    }
}

// Scaling factor s such that the coefficients of s·p (p in ps) become
// polynomial with their common polynomial content removed. Left scaling by a
// field element preserves right-divisor structure, so Euclidean chains stay
// exact while intermediate fractions are kept small.
DElement skew_strip_scale(const std::vector<const SkewPoly*>& ps) {
    TowerPtr t = ps.front()->tower();
    MPoly L(Rat(1)), G;
    bool any = false;
    for (auto* p : ps)
        for (int i = 0; i <= p->degree(); ++i) {
            DElement c = p->coeff(size_t(i));
            if (c.is_zero()) continue;
            any = true;
            L = (L * c.den()).divide_exact(MPoly::gcd(L, c.den()));
            G = G.is_zero() ? c.num().ipp() : MPoly::gcd(G, c.num());
        }
    if (!any) return t->constant(1);
    return t->element(L, G);
}

namespace {

// Pseudo-division from the right: f·A = Q∘B + R with f a power of lc(B).
// Avoids coefficient inversions, so polynomial coefficients stay polynomial.
void right_pdivmod(const SkewPoly& A, const SkewPoly& B, SkewPoly& Q, SkewPoly& R, DElement& f) {
    TowerPtr t = Tower::common(A.tower(), B.tower());
    SkewPoly th = SkewPoly::theta(t, A.deriv());
    std::vector<SkewPoly> S{B}; // S[k] = θ^k ∘ B
    for (int k = 0; k + B.degree() < A.degree(); ++k) S.push_back(th * S.back());
    DElement lb = B.lc();
    Q = SkewPoly(t, A.deriv());
    R = A;
    f = t->constant(1);
    while (R.degree() >= B.degree()) {
        size_t k = size_t(R.degree() - B.degree());
        DElement cr = R.lc();
        SkewPoly term(t, A.deriv());
        term.set_coeff(k, cr);
        Q = lb * Q + term;
        R = lb * R - cr * S[k];
        f = f * lb;
        if (!R.is_zero()) {
            // keep the remainder primitive; rescale the whole identity
            DElement s = skew_strip_scale({&R});
            R = s * R;
            Q = s * Q;
            f = s * f;
        }
    }
}

} // namespace

SkewPoly SkewPoly::gcrd(SkewPoly a, SkewPoly b) {
    if (!a.is_zero()) a = skew_strip_scale({&a}) * a;
    if (!b.is_zero()) b = skew_strip_scale({&b}) * b;
    while (!b.is_zero()) {
        SkewPoly q(a.t_, a.d_), r(a.t_, a.d_);
        DElement f = a.t_->constant(1);
        right_pdivmod(a, b, q, r, f);
        if (!r.is_zero()) r = skew_strip_scale({&r}) * r;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

SkewPoly SkewPoly::lclm(const SkewPoly& a, const SkewPoly& b, SkewPoly* U, SkewPoly* V) {
    if (a.is_zero() || b.is_zero()) throw std::domain_error("SkewPoly::lclm: zero argument");
    TowerPtr t = Tower::common(a.t_, b.t_);
    SkewPoly one = constant(t, a.d_, t->constant(1)), zero(t, a.d_);
    // Work with stripped copies; fold the entry scalings into the cofactors,
    // using that s·p = p composed on the left with the constant s.
    DElement sa = skew_strip_scale({&a}), sb = skew_strip_scale({&b});
    // r_i = u_i∘(sa·a) + v_i∘(sb·b)
    SkewPoly r0 = sa * a, r1 = sb * b;
    SkewPoly u0 = one, u1 = zero, v0 = zero, v1 = one;
    while (!r1.is_zero()) {
        SkewPoly q(t, a.d_), r2(t, a.d_);
        DElement f = t->constant(1);
        right_pdivmod(r0, r1, q, r2, f); // f·r0 = q∘r1 + r2
        SkewPoly u2 = f * u0 - q * u1, v2 = f * v0 - q * v1;
        if (!r2.is_zero()) {
            DElement s = skew_strip_scale({&r2});
            r2 = s * r2;
            u2 = s * u2;
            v2 = s * v2;
        }
        r0 = std::move(r1);
        r1 = std::move(r2);
        u0 = std::move(u1);
        u1 = std::move(u2);
        v0 = std::move(v1);
        v1 = std::move(v2);
    }
    // now u1∘(sa·a) + v1∘(sb·b) = 0; fold the scalings back onto u1, v1
    u1 = u1 * constant(t, a.d_, sa);
    v1 = v1 * constant(t, a.d_, sb);
    // u1∘a + v1∘b = 0, so u1∘a = -v1∘b is the lclm
    SkewPoly L = u1 * a;
    if (L.is_zero()) throw std::logic_error("SkewPoly::lclm: degenerate");
    DElement s = L.lc().inverse();
    L = s * L;
    if (U) *U = s * u1;
    if (V) *V = -(s * v1);
    return L;
}

SkewPoly SkewPoly::lcrm(const SkewPoly& a, const SkewPoly& b, SkewPoly* U, SkewPoly* V) {
    if (a.is_zero() || b.is_zero()) throw std::domain_error("SkewPoly::lcrm: zero argument");
    // L = a∘U = b∘V  <=>  L* = U*∘a* = V*∘b*
    SkewPoly Us(a.t_, a.d_), Vs(a.t_, a.d_);
    SkewPoly L = lclm(a.adjoint(), b.adjoint(), &Us, &Vs);
    if (U) *U = Us.adjoint();
    if (V) *V = Vs.adjoint();
    return L.adjoint();
}

SkewPoly SkewPoly::adjoint() const {
    SkewPoly mth = -theta(t_, d_);
    SkewPoly r(t_, d_);
    SkewPoly p = constant(t_, d_, t_->constant(1));
    for (size_t i = 0; i < c_.size(); ++i) {
        if (!c_[i].is_zero()) r = r + p * constant(t_, d_, c_[i]);
        if (i + 1 < c_.size()) p = mth * p;
    }
    return r;
}

LPDO SkewPoly::to_lpdo() const {
    LPDO th = d_.kind == SkewDeriv::Dy ? LPDO::dy(t_)
                                       : LPDO::dx(t_) + d_.a.lift(t_) * LPDO::dy(t_);
    LPDO r(t_);
    LPDO p = LPDO::one(t_);
    for (size_t i = 0; i < c_.size(); ++i) {
        if (!c_[i].is_zero()) r += c_[i] * p;
        if (i + 1 < c_.size()) p = th * p;
    }
    return r;
}

std::string SkewPoly::str(const std::string& sym) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (size_t i = c_.size(); i-- > 0;) {
        if (c_[i].is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        os << "(" << c_[i].str() << ")";
        if (i) os << "*" << sym;
        if (i > 1) os << "^" << i;
    }
    return os.str();
}

// ---------------------------------------------------------------- SkewFrac

namespace {

// Greatest common left divisor via the adjoint: gcld(a,b) = gcrd(a*, b*)*.
SkewPoly skew_gcld(const SkewPoly& a, const SkewPoly& b) {
    return SkewPoly::gcrd(a.adjoint(), b.adjoint()).adjoint();
}

// Exact quotient q with a = g ∘ q; g has unit leading coefficient here, so
// plain left division never inverts a coefficient.
SkewPoly left_quot_exact(const SkewPoly& a, const SkewPoly& g) {
    SkewPoly q(a.tower(), a.deriv()), r(a.tower(), a.deriv());
    SkewPoly::left_divmod(a, g, q, r);
    if (!r.is_zero()) throw std::logic_error("SkewFrac: gcld does not divide");
    return q;
}

} // namespace

SkewFrac::SkewFrac(SkewPoly num, SkewPoly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw std::domain_error("SkewFrac: zero denominator");
    if (!num_.deriv().compatible(den_.deriv()))
        throw std::invalid_argument("SkewFrac: mixed derivations");
    if (num_.is_zero()) {
        den_ = SkewPoly::constant(den_.tower(), den_.deriv(), den_.tower()->constant(1));
        return;
    }
    // scaling numerator and denominator together keeps the value and keeps
    // the coefficients polynomial and small
    DElement s = skew_strip_scale({&num_, &den_});
    num_ = s * num_;
    den_ = s * den_;
    // cancel the greatest common left divisor: (g u)^{-1}(g v) = u^{-1} v
    SkewPoly g = skew_gcld(den_, num_);
    if (g.degree() >= 1) {
        num_ = left_quot_exact(num_, g);
        den_ = left_quot_exact(den_, g);
    }
    DElement s2 = skew_strip_scale({&num_, &den_});
    num_ = s2 * num_;
    den_ = s2 * den_;
    // fix the remaining unit: leading rational coefficient of lc(den) = 1
    DElement lc = den_.lc();
    Rat lead = lc.num().leading_coeff() / lc.den().leading_coeff();
    DElement c = tower()->constant(Rat(1) / lead);
    num_ = c * num_;
    den_ = c * den_;
}

SkewFrac SkewFrac::operator-() const {
    SkewFrac r = *this;
    r.num_ = -r.num_;
    return r;
}

SkewFrac operator+(const SkewFrac& a, const SkewFrac& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    SkewPoly U(a.tower(), a.num_.deriv()), V(a.tower(), a.num_.deriv());
    SkewPoly L = SkewPoly::lclm(a.den_, b.den_, &U, &V);
    return SkewFrac(U * a.num_ + V * b.num_, L);
}

SkewFrac operator-(const SkewFrac& a, const SkewFrac& b) { return a + (-b); }

SkewFrac operator*(const SkewFrac& a, const SkewFrac& b) {
    if (a.is_zero() || b.is_zero()) return SkewFrac(a.tower());
    // a1∘b2^{-1} = X^{-1}∘W with X∘a1 = W∘b2
    SkewPoly X(a.tower(), a.num_.deriv()), W(a.tower(), a.num_.deriv());
    SkewPoly::lclm(a.num_, b.den_, &X, &W);
    return SkewFrac(W * b.num_, X * a.den_);
}

SkewFrac SkewFrac::inverse() const {
    if (is_zero()) throw std::domain_error("SkewFrac: inverse of zero");
    return SkewFrac(den_, num_);
}

SkewFrac SkewFrac::dx_action() const {
    auto dx_poly = [](const SkewPoly& p) {
        SkewPoly r(p.tower(), p.deriv());
        for (int i = 0; i <= p.degree(); ++i)
            r.set_coeff(size_t(i), p.coeff(size_t(i)).derive(Var::X));
        return r;
    };
    SkewFrac bn = SkewFrac(dx_poly(num_),
                           SkewPoly::constant(tower(), num_.deriv(), tower()->constant(1)));
    SkewFrac bd = SkewFrac(dx_poly(den_),
                           SkewPoly::constant(tower(), num_.deriv(), tower()->constant(1)));
    SkewFrac binv(SkewPoly::constant(tower(), num_.deriv(), tower()->constant(1)), den_);
    return binv * bn - binv * bd * binv * SkewFrac(num_, SkewPoly::constant(tower(), num_.deriv(), tower()->constant(1)));
}

std::string SkewFrac::str() const {
    return "(" + den_.str("Dy") + ")^-1 * (" + num_.str("Dy") + ")";
}

// ------------------------------------------------------------------ DxPoly

DxPoly DxPoly::from_lpdo(const LPDO& T) {
    DxPoly r(T.tower());
    std::map<unsigned, SkewPoly> cols;
    for (auto& [ij, c] : T.coeffs()) {
        auto it = cols.find(ij.first);
        if (it == cols.end())
            it = cols.emplace(ij.first, SkewPoly(T.tower(), SkewDeriv::mk_dy())).first;
        it->second.set_coeff(ij.second, c);
    }
    for (auto& [i, p] : cols) r.set_coeff(i, SkewFrac::from_poly(p));
    return r;
}

void DxPoly::set_coeff(size_t i, const SkewFrac& v) {
    if (i >= c_.size()) c_.resize(i + 1, SkewFrac(t_));
    c_[i] = v;
    trim();
}

DxPoly DxPoly::operator-() const {
    DxPoly r = *this;
    for (auto& e : r.c_) e = -e;
    return r;
}

DxPoly operator+(const DxPoly& a, const DxPoly& b) {
    DxPoly r(a.t_);
    r.c_.assign(std::max(a.c_.size(), b.c_.size()), SkewFrac(a.t_));
    for (size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = a.coeff(i) + b.coeff(i);
    r.trim();
    return r;
}

DxPoly operator-(const DxPoly& a, const DxPoly& b) { return a + (-b); }

namespace {

// d_x ∘ Q over fraction coefficients
DxPoly dx_compose(const DxPoly& Q) {
    DxPoly r(Q.tower());
    for (int i = 0; i <= Q.degree(); ++i) {
        SkewFrac c = Q.coeff(size_t(i));
        if (c.is_zero()) continue;
        r.set_coeff(size_t(i) + 1, r.coeff(size_t(i) + 1) + c);
        r.set_coeff(size_t(i), r.coeff(size_t(i)) + c.dx_action());
    }
    return r;
}

} // namespace

DxPoly operator*(const SkewFrac& s, const DxPoly& a) {
    DxPoly r(a.t_);
    for (int i = 0; i <= a.degree(); ++i) {
        SkewFrac c = s * a.coeff(size_t(i));
        if (!c.is_zero()) r.set_coeff(size_t(i), c);
    }
    return r;
}

DxPoly operator*(const DxPoly& a, const DxPoly& b) {
    DxPoly r(a.t_);
    DxPoly tmp = b;
    for (int i = 0; i <= a.degree(); ++i) {
        if (!a.coeff(size_t(i)).is_zero()) r = r + a.coeff(size_t(i)) * tmp;
        if (i < a.degree()) tmp = dx_compose(tmp);
    }
    return r;
}

void DxPoly::divide_dx(const DxPoly& A, const DxPoly& B, DxPoly& Q, DxPoly& R) {
    if (B.is_zero()) throw std::domain_error("DxPoly: division by zero");
    Q = DxPoly(A.t_);
    R = A;
    SkewFrac li = B.coeff(size_t(B.degree())).inverse();
    while (R.degree() >= B.degree()) {
        size_t k = size_t(R.degree() - B.degree());
        SkewFrac f = R.coeff(size_t(R.degree())) * li;
        DxPoly term(A.t_);
        term.set_coeff(k, f);
        Q = Q + term;
        R = R - term * B;
    }
}

std::pair<SkewPoly, LPDO> DxPoly::clear_denominators() const {
    SkewDeriv dy = SkewDeriv::mk_dy();
    SkewPoly B = SkewPoly::constant(t_, dy, t_->constant(1));
    for (auto& c : c_) {
        if (c.is_zero()) continue;
        B = SkewPoly::lclm(B, c.den());
    }
    LPDO P(t_);
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i].is_zero()) continue;
        // B = U ∘ den_i exactly
        SkewPoly U(t_, dy), rem(t_, dy);
        SkewPoly::right_divmod(B, c_[i].den(), U, rem);
        if (!rem.is_zero()) throw std::logic_error("clear_denominators: lclm failed");
        SkewPoly Ai = U * c_[i].num();
        for (int j = 0; j <= Ai.degree(); ++j) {
            DElement v = Ai.coeff(size_t(j));
            if (!v.is_zero())
                P.set_coeff(unsigned(i), unsigned(j), P.coeff(unsigned(i), unsigned(j)) + v);
        }
    }
    return {B, P};
}

std::string DxPoly::str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (size_t i = c_.size(); i-- > 0;) {
        if (c_[i].is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        os << "[" << c_[i].str() << "]";
        if (i) os << "*Dx";
        if (i > 1) os << "^" << i;
    }
    return os.str();
}

} // namespace fds
