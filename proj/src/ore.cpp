#include "fds/ore.hpp"

namespace fds {

namespace {

SkewPoly sk_one(const TowerPtr& t) {
    return SkewPoly::constant(t, SkewDeriv::mk_dy(), t->constant(1));
}

DxPoly dx_const(const TowerPtr& t, const SkewFrac& s) {
    DxPoly r(t);
    r.set_coeff(0, s);
    return r;
}

// s such that s·T has polynomial coefficients with common content removed.
DElement lpdo_strip_scale(const LPDO& T) {
    const TowerPtr& t = T.tower();
    MPoly L(Rat(1)), G;
    for (auto& [ij, c] : T.coeffs()) {
        if (c.is_zero()) continue;
        L = (L * c.den()).divide_exact(MPoly::gcd(L, c.den()));
        G = G.is_zero() ? c.num().ipp() : MPoly::gcd(G, c.num());
    }
    if (G.is_zero()) return t->constant(1);
    return t->element(L, G);
}

// A DxPoly whose coefficients all have a degree-0 denominator, as an LPDO.
LPDO dxpoly_to_lpdo(const DxPoly& A) {
    const TowerPtr& t = A.tower();
    LPDO r(t);
    for (int i = 0; i <= A.degree(); ++i) {
        SkewFrac c = A.coeff(size_t(i));
        if (c.is_zero()) continue;
        if (c.den().degree() != 0)
            throw std::logic_error("dxpoly_to_lpdo: coefficient not cleared");
        DElement d0 = c.den().coeff(0).inverse();
        for (int j = 0; j <= c.num().degree(); ++j) {
            DElement v = d0 * c.num().coeff(size_t(j));
            if (!v.is_zero()) r.set_coeff(unsigned(i), unsigned(j), r.coeff(unsigned(i), unsigned(j)) + v);
        }
    }
    return r;
}

// Coefficient-wise ∂/∂x of a polynomial in F[d_y]; equals the commutator
// [d_x, a] since d_x commutes with d_y.
SkewPoly skew_dx(const SkewPoly& a) {
    SkewPoly r(a.tower(), a.deriv());
    for (int j = 0; j <= a.degree(); ++j) {
        DElement d = a.coeff(size_t(j)).derive(Var::X);
        if (!d.is_zero()) r.set_coeff(size_t(j), d);
    }
    return r;
}

// b̄ and the d_x-coefficients of p̄ with b̄·(sum cur_i d_x^i) = p̄·b, using only
// polynomial skew arithmetic: peel the top coefficient c_I via U∘b = V∘c_I
// (lclm), subtract U∘d_x^I∘b from V∘p (Leibniz expands the commutator into
// x-derivatives of b), and recurse on the lower-degree remainder.
std::pair<SkewPoly, std::vector<SkewPoly>> swap_peel(const TowerPtr& t, std::vector<SkewPoly> cur,
                                                     const SkewPoly& b) {
    int I = int(cur.size()) - 1;
    while (I >= 0 && cur[size_t(I)].is_zero()) --I;
    if (I < 0) return {sk_one(t), {}};
    // joint content strip: solving for s·p instead of p only right-multiplies
    // the resulting b̄ by the constant s
    std::vector<const SkewPoly*> cp;
    for (int i = 0; i <= I; ++i) cp.push_back(&cur[size_t(i)]);
    DElement sc = skew_strip_scale(cp);
    if (!sc.is_one())
        for (int i = 0; i <= I; ++i) cur[size_t(i)] = sc * cur[size_t(i)];
    SkewPoly U(t, b.deriv()), V(t, b.deriv());
    SkewPoly::lclm(b, cur[size_t(I)], &U, &V);
    DElement s = skew_strip_scale({&U, &V});
    U = s * U;
    V = s * V;
    if (!(V * cur[size_t(I)] - U * b).is_zero()) throw std::logic_error("ore_swap: lclm cofactors");

    std::vector<SkewPoly> w;
    for (int i = 0; i < I; ++i) w.push_back(V * cur[size_t(i)]);
    SkewPoly bx = b;
    Int binom = 1;
    for (int k = 1; k <= I; ++k) {
        bx = skew_dx(bx);
        binom = binom * (I - k + 1) / k;
        if (bx.is_zero()) break;
        w[size_t(I - k)] = w[size_t(I - k)] - t->constant(Rat(binom)) * (U * bx);
    }

    auto [b2, p2] = swap_peel(t, std::move(w), b);
    std::vector<SkewPoly> pbar(size_t(I) + 1, SkewPoly(t, b.deriv()));
    for (size_t i = 0; i < p2.size(); ++i) pbar[i] = p2[i];
    pbar[size_t(I)] = pbar[size_t(I)] + b2 * U;
    SkewPoly bbar = b2 * V;
    if (!sc.is_one()) bbar = bbar * SkewPoly::constant(t, b.deriv(), sc);
    return {std::move(bbar), std::move(pbar)};
}

} // namespace

OreSwapLeft ore_swap(const LPDO& p, const SkewPoly& b) {
    if (b.is_zero()) throw std::domain_error("ore_swap: zero denominator");
    TowerPtr t = Tower::common(p.tower(), b.tower());
    LPDO pl = p.lift(t);
    SkewPoly blp = SkewPoly(t, b.deriv(), {}) + b;
    if (pl.is_zero()) return {sk_one(t), LPDO(t)};

    std::vector<SkewPoly> cur(size_t(pl.order_dx()) + 1, SkewPoly(t, blp.deriv()));
    for (auto& [ij, c] : pl.coeffs())
        if (!c.is_zero()) cur[ij.first].set_coeff(ij.second, c);
    auto [bbar, pvec] = swap_peel(t, std::move(cur), blp);

    LPDO pbar(t);
    for (size_t i = 0; i < pvec.size(); ++i)
        if (!pvec[i].is_zero())
            pbar += pvec[i].to_lpdo() * LPDO::monomial(t, unsigned(i), 0, t->constant(1));
    if (bbar.to_lpdo() * pl != pbar * blp.to_lpdo()) throw std::logic_error("ore_swap: bad witness");
    return {bbar, pbar};
}

OreSwapRight ore_swap_right(const SkewPoly& b, const LPDO& p) {
    if (b.is_zero()) throw std::domain_error("ore_swap_right: zero denominator");
    TowerPtr t = Tower::common(p.tower(), b.tower());
    LPDO pl = p.lift(t);
    SkewPoly blp = SkewPoly(t, b.deriv(), {}) + b;
    if (pl.is_zero()) return {LPDO(t), sk_one(t)};
    // The unknown coefficients would sit to the right of p here, which is not
    // an F-linear system, so reduce to the left swap via formal adjoints:
    // b̄·p* = p̄·b*  ⟹  p·b̄* = b·p̄*.
    OreSwapLeft L = ore_swap(pl.adjoint(), blp.adjoint());
    OreSwapRight r{L.pbar.adjoint(), L.bbar.adjoint()};
    if (blp.to_lpdo() * r.p2 != pl * r.b2.to_lpdo()) throw std::logic_error("ore_swap_right: bad witness");
    return r;
}

OreFraction::OreFraction(LPDO p, SkewPoly b) : p_(std::move(p)), b_(std::move(b)) {
    if (b_.is_zero()) throw std::domain_error("OreFraction: zero denominator");
    TowerPtr t = Tower::common(p_.tower(), b_.tower());
    p_ = p_.lift(t);
    b_ = SkewPoly(t, b_.deriv(), {}) + b_;
    if (p_.is_zero()) b_ = sk_one(t);
}

OreFraction OreFraction::from_lpdo(const LPDO& p) { return OreFraction(p, sk_one(p.tower())); }

DxPoly OreFraction::value() const {
    DxPoly P = DxPoly::from_lpdo(p_);
    if (b_.degree() == 0 && b_.coeff(0).is_one()) return P;
    return P * dx_const(tower(), SkewFrac(sk_one(tower()), b_));
}

const OreSwapLeft& OreFraction::left_form() const {
    if (!left_) left_ = std::make_shared<OreSwapLeft>(ore_swap(p_, b_));
    return *left_;
}

namespace {

OreFraction from_dxpoly(const DxPoly& v) {
    auto [B, P] = v.clear_denominators(); // B^{-1}·P = v
    auto sw = ore_swap_right(B, P);       // B·p2 = P·b2, hence v = p2·b2^{-1}
    return OreFraction(sw.p2, sw.b2);
}

} // namespace

OreFraction operator+(const OreFraction& a, const OreFraction& b) {
    return from_dxpoly(a.value() + b.value());
}

OreFraction operator*(const OreFraction& a, const OreFraction& b) {
    return from_dxpoly(a.value() * b.value());
}

std::string OreFraction::str() const {
    return "(" + p_.str() + ") * (" + b_.str("Dy") + ")^-1";
}

LeftGcdResult left_gcd(const std::vector<LPDO>& gens0) {
    std::vector<LPDO> gens;
    TowerPtr t;
    for (auto& g : gens0) {
        if (g.is_zero()) continue;
        t = t ? Tower::common(t, g.tower()) : g.tower();
        gens.push_back(g);
    }
    if (gens.empty()) throw std::invalid_argument("left_gcd: all generators zero");
    for (auto& g : gens) g = g.lift(t);
    size_t n = gens.size();

    auto unit_cof = [&](size_t i) {
        std::vector<DxPoly> c(n, DxPoly(t));
        c[i] = dx_const(t, SkewFrac::from_poly(sk_one(t)));
        return c;
    };

    // extended Euclid in d_x over the skew field of fractions of F[d_y]
    DxPoly g = DxPoly::from_lpdo(gens[0]);
    std::vector<DxPoly> cof = unit_cof(0);
    for (size_t i = 1; i < n; ++i) {
        DxPoly r0 = g, r1 = DxPoly::from_lpdo(gens[i]);
        std::vector<DxPoly> c0 = cof, c1 = unit_cof(i);
        while (!r1.is_zero()) {
            DxPoly q(t), r2(t);
            DxPoly::divide_dx(r0, r1, q, r2);
            std::vector<DxPoly> c2(n, DxPoly(t));
            for (size_t j = 0; j < n; ++j) c2[j] = c0[j] - q * c1[j];
            r0 = std::move(r1);
            r1 = std::move(r2);
            c0 = std::move(c1);
            c1 = std::move(c2);
        }
        g = std::move(r0);
        cof = std::move(c0);
    }

    // normalize: monic top d_x coefficient, then clear to F[d_x,d_y] and
    // remove the content
    SkewFrac linv = g.coeff(size_t(g.degree())).inverse();
    g = linv * g;
    for (auto& c : cof) c = linv * c;
    auto [bg, Pg] = g.clear_denominators(); // bg^{-1}·Pg = g
    DElement s = lpdo_strip_scale(Pg);
    LeftGcdResult res{s * Pg, {}, SkewPoly(t, SkewDeriv::mk_dy()), {}, true};
    SkewPoly Bfull = s * bg; // res.gcd = Bfull ∘ g

    // Eq. (4) membership: generator_j = C_j∘g = (C_j∘Bfull^{-1})∘gcd
    DxPoly binv = dx_const(t, SkewFrac(sk_one(t), Bfull));
    for (size_t j = 0; j < n; ++j) {
        DxPoly q(t), r(t);
        DxPoly::divide_dx(DxPoly::from_lpdo(gens[j]), g, q, r);
        if (!r.is_zero()) throw std::logic_error("left_gcd: gcd does not divide a generator");
        auto [bb, pb] = (q * binv).clear_denominators();
        if (pb * res.gcd != bb.to_lpdo() * gens[j]) res.verified = false;
        res.member.push_back({gens[j], bb, pb});
    }

    // representation: gcd = Bfull∘g = sum (Bfull∘cof_j)∘generator_j; clear the
    // fraction cofactors to a common left denominator b̄
    std::vector<DxPoly> V(n, DxPoly(t));
    DxPoly bfull = dx_const(t, SkewFrac::from_poly(Bfull));
    SkewPoly B = sk_one(t);
    for (size_t j = 0; j < n; ++j) {
        V[j] = bfull * cof[j];
        for (int i = 0; i <= V[j].degree(); ++i) {
            SkewFrac c = V[j].coeff(size_t(i));
            if (!c.is_zero()) B = SkewPoly::lclm(B, c.den());
        }
    }
    DxPoly bD = dx_const(t, SkewFrac::from_poly(B));
    LPDO lhs = B.to_lpdo() * res.gcd, rhs(t);
    for (size_t j = 0; j < n; ++j) {
        LPDO w = dxpoly_to_lpdo(bD * V[j]);
        rhs += w * gens[j];
        res.bezout_p.push_back(w);
    }
    res.bezout_b = B;
    if (lhs != rhs) res.verified = false;
    return res;
}

SymbolGcd symbol_gcd(const std::vector<LPDO>& gens) {
    TowerPtr t;
    for (auto& g : gens)
        if (!g.is_zero()) t = t ? Tower::common(t, g.tower()) : g.tower();
    if (!t) return {Symbol{Tower::base(), {}}, 0};
    UPoly G(t);
    unsigned etam = 0;
    bool first = true;
    for (auto& g0 : gens) {
        if (g0.is_zero()) continue;
        Symbol s = symbol_of(g0.lift(t));
        int d = -1;
        for (size_t j = 0; j < s.b.size(); ++j)
            if (!s.b[j].is_zero()) d = int(j);
        UPoly u(t);
        for (int j = 0; j <= d; ++j) u.set_coeff(size_t(j), s.b[size_t(j)]);
        unsigned em = s.degree() - unsigned(d);
        if (first) {
            G = u.monic();
            etam = em;
            first = false;
        } else {
            G = UPoly::gcd(G, u);
            etam = std::min(etam, em);
        }
    }
    Symbol g{t, std::vector<DElement>(size_t(G.degree()) + etam + 1, t->constant(0))};
    for (int k = 0; k <= G.degree(); ++k) g.b[size_t(k)] = G.coeff(size_t(k));
    return {g, unsigned(G.degree()) + etam};
}

} // namespace fds
