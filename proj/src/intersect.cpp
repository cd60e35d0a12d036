#include "fds/intersect.hpp"

#include "fds/linsolve.hpp"

#include <stdexcept>

namespace fds {

namespace {

TowerPtr common_tower(const TowerPtr& t, const DElement& a, const std::vector<DElement>& bs) {
    TowerPtr tw = Tower::common(t, a.tower());
    for (const auto& b : bs) tw = Tower::common(tw, b.tower());
    return tw;
}

std::vector<DElement> dedup(const std::vector<DElement>& bs, const TowerPtr& tw) {
    std::vector<DElement> out;
    for (const auto& b : bs) {
        DElement bl = b.lift(tw);
        bool seen = false;
        for (const auto& o : out)
            if (o == bl) {
                seen = true;
                break;
            }
        if (!seen) out.push_back(bl);
    }
    return out;
}

// Homogeneous system in the n*s coefficients t_{j,i} of T_j = sum_i t_{j,i} E^i
// expressing T_1(E+b_1) = T_j(E+b_j) for all j.
DMat class_system(const TowerPtr& tw, const SkewDeriv& d, const std::vector<DElement>& bs,
                  int s) {
    size_t n = bs.size();
    SkewPoly th = SkewPoly::theta(tw, d);
    std::vector<SkewPoly> epow{SkewPoly::constant(tw, d, tw->constant(1))};
    for (int i = 1; i < s; ++i) epow.push_back(epow.back() * th);

    // prods[j][i] = E^i (E + b_j)
    std::vector<std::vector<SkewPoly>> prods;
    for (size_t j = 0; j < n; ++j) {
        SkewPoly gen = th + SkewPoly::constant(tw, d, bs[j]);
        std::vector<SkewPoly> row;
        for (int i = 0; i < s; ++i) row.push_back(epow[i] * gen);
        prods.push_back(std::move(row));
    }

    DMat A;
    DElement zero = tw->constant(0);
    for (size_t j = 1; j < n; ++j)
        for (int p = 0; p <= s; ++p) {
            DVec row(n * size_t(s), zero);
            for (int i = 0; i < s; ++i) {
                row[size_t(i)] = prods[0][size_t(i)].coeff(size_t(p));
                row[j * size_t(s) + size_t(i)] = -prods[j][size_t(i)].coeff(size_t(p));
            }
            A.push_back(std::move(row));
        }
    return A;
}

} // namespace

SkewPoly FirstOrderIdeal::generator() const {
    TowerPtr tw = Tower::common(a.tower(), b.tower());
    SkewDeriv d = SkewDeriv::mk_e(a.lift(tw));
    return SkewPoly(tw, d, {b.lift(tw), tw->constant(1)});
}

LPDO FirstOrderIdeal::lpdo() const {
    TowerPtr tw = Tower::common(a.tower(), b.tower());
    return LPDO::dx(tw) + a.lift(tw) * LPDO::dy(tw) + b.lift(tw) * LPDO::one(tw);
}

ClassGenerator same_symbol_generator(const TowerPtr& t, const DElement& a,
                                     const std::vector<DElement>& bs) {
    if (bs.empty()) throw std::invalid_argument("same_symbol_generator: no generators");
    TowerPtr tw = common_tower(t, a, bs);
    DElement al = a.lift(tw);
    SkewDeriv d = SkewDeriv::mk_e(al);
    std::vector<DElement> bl = dedup(bs, tw);
    size_t n = bl.size();
    SkewPoly th = SkewPoly::theta(tw, d);
    SkewPoly one = SkewPoly::constant(tw, d, tw->constant(1));

    if (n == 1) {
        SkewPoly Z = th + SkewPoly::constant(tw, d, bl[0]);
        return {al, Z, {one}, bl};
    }

    for (int s = 1; s <= int(n); ++s) {
        DMat A = class_system(tw, d, bl, s);
        auto basis = lin_nullspace(A, tw);
        if (basis.empty()) continue;

        const DVec& v = basis.front();
        std::vector<SkewPoly> T;
        for (size_t j = 0; j < n; ++j) {
            std::vector<DElement> cs(v.begin() + long(j) * s, v.begin() + long(j + 1) * s);
            T.emplace_back(tw, d, cs);
        }
        SkewPoly Z = T[0] * (th + SkewPoly::constant(tw, d, bl[0]));
        if (Z.degree() != s)
            throw std::logic_error("same_symbol_generator: degree drop contradicts minimality");
        DElement inv = Z.lc().inverse();
        Z = Z.monic();
        for (size_t j = 0; j < n; ++j) {
            T[j] = inv * T[j];
            SkewPoly gen = th + SkewPoly::constant(tw, d, bl[j]);
            if (T[j] * gen != Z) throw std::logic_error("same_symbol_generator: witness mismatch");
            SkewPoly q(tw, d), r(tw, d);
            SkewPoly::right_divmod(Z, gen, q, r);
            if (!r.is_zero())
                throw std::logic_error("same_symbol_generator: divisibility check failed");
        }
        return {al, Z, T, bl};
    }
    throw std::logic_error("same_symbol_generator: order cutoff n exceeded");
}

RankCertificate class_system_rank(const TowerPtr& t, const DElement& a,
                                  const std::vector<DElement>& bs, int s) {
    TowerPtr tw = common_tower(t, a, bs);
    SkewDeriv d = SkewDeriv::mk_e(a.lift(tw));
    std::vector<DElement> bl = dedup(bs, tw);
    if (s < 1) return {0, 0, 0};
    DMat A = class_system(tw, d, bl, s);
    return {int(A.size()), int(bl.size()) * s, lin_rank(A, tw)};
}

DElement eq33_residual(const SkewPoly& Q, const DElement& b) {
    const TowerPtr& tw = Q.tower();
    const SkewDeriv& d = Q.deriv();
    int s = Q.degree();
    if (s < 1) throw std::invalid_argument("eq33_residual: constant operator");
    DElement bl = b.lift(tw);

    std::vector<DElement> db{bl}; // delta^m(b)
    for (int m = 1; m < s; ++m) db.push_back(d(db.back()));
    auto binom = [](int nn, int kk) {
        Rat r(1);
        for (int i = 0; i < kk; ++i) r *= Rat(nn - i, i + 1);
        return r;
    };
    // b_{j,i} = C(i, i-j) delta^{i-j}(b), the coefficient of t_i in the E^j
    // component of (sum t_i E^i)(E+b); f's by forward substitution.
    std::vector<DElement> f(size_t(s) + 1, tw->constant(0));
    for (int i = 0; i < s; ++i) {
        DElement rhs = db[size_t(i)]; // b_{0,i}
        for (int j = 1; j <= i; ++j)
            rhs = rhs - f[size_t(j)] * binom(i, i - j) * db[size_t(i - j)];
        f[size_t(i) + 1] = rhs;
    }
    DElement res = Q.coeff(0);
    for (int j = 1; j <= s; ++j) res = res - Q.coeff(size_t(j)) * f[size_t(j)];
    return res;
}

PrincipalityResult principality_test(const std::vector<ClassGenerator>& classes) {
    if (classes.empty()) throw std::invalid_argument("principality_test: no classes");
    TowerPtr tw = classes[0].Z.tower();
    for (const auto& c : classes) {
        tw = Tower::common(tw, c.Z.tower());
        tw = Tower::common(tw, c.a.tower());
    }
    size_t l = classes.size();
    std::vector<DElement> as;
    for (const auto& c : classes) as.push_back(c.a.lift(tw));
    for (size_t i = 0; i < l; ++i)
        for (size_t j = i + 1; j < l; ++j)
            if (as[i] == as[j])
                throw std::invalid_argument(
                    "principality_test: duplicate directions, merge the classes first");

    std::vector<LPDO> Zl;
    int s = 0;
    for (const auto& c : classes) {
        Zl.push_back(c.Z.to_lpdo().lift(tw));
        s += c.order();
    }

    if (l == 1) return {true, Zl[0], {LPDO::one(tw)}, {}};

    // Unknowns: coefficients of V_i on monomials d_x^p d_y^q, p+q <= s-s_i;
    // columns are the operators d_x^p d_y^q Z_i.
    std::vector<std::vector<std::pair<unsigned, unsigned>>> mons(l);
    std::vector<std::vector<LPDO>> cols(l);
    std::vector<size_t> off(l + 1, 0);
    for (size_t i = 0; i < l; ++i) {
        int bound = s - classes[i].order();
        for (unsigned p = 0; int(p) <= bound; ++p)
            for (unsigned q = 0; int(p + q) <= bound; ++q) {
                mons[i].push_back({p, q});
                cols[i].push_back(LPDO::monomial(tw, p, q, tw->constant(1)) * Zl[i]);
            }
        off[i + 1] = off[i] + mons[i].size();
    }

    DMat A;
    DElement zero = tw->constant(0);
    for (size_t i = 1; i < l; ++i)
        for (unsigned r = 0; int(r) <= s; ++r)
            for (unsigned c = 0; int(r + c) <= s; ++c) {
                DVec row(off[l], zero);
                for (size_t u = 0; u < cols[0].size(); ++u)
                    row[off[0] + u] = cols[0][u].coeff(r, c);
                for (size_t u = 0; u < cols[i].size(); ++u)
                    row[off[i] + u] = row[off[i] + u] - cols[i][u].coeff(r, c);
                A.push_back(std::move(row));
            }

    RankCertificate cert{int(A.size()), int(off[l]), lin_rank(A, tw)};
    auto basis = lin_nullspace(A, tw);
    if (basis.empty()) return {false, LPDO(tw), {}, cert};

    const DVec& v = basis.front();
    std::vector<LPDO> V;
    for (size_t i = 0; i < l; ++i) {
        LPDO Vi(tw);
        for (size_t u = 0; u < mons[i].size(); ++u)
            Vi.set_coeff(mons[i][u].first, mons[i][u].second, v[off[i] + u]);
        V.push_back(Vi);
    }
    LPDO Q = V[0] * Zl[0];
    for (size_t i = 1; i < l; ++i)
        if (V[i] * Zl[i] != Q) throw std::logic_error("principality_test: cofactor mismatch");
    if (Q.order() != s)
        throw std::logic_error("principality_test: generator order below s contradicts the bound");
    DElement top = Q.coeff(unsigned(s), 0);
    if (top.is_zero()) throw std::logic_error("principality_test: d_x^s missing from generator");
    DElement inv = top.inverse();
    Q = inv * Q;
    for (auto& Vi : V) Vi = inv * Vi;

    // symb(Q) = prod (xi + a_i eta)^{s_i}, both sides monic in xi.
    Symbol prod{tw, {tw->constant(1)}};
    for (size_t i = 0; i < l; ++i) {
        Symbol lin{tw, {as[i], tw->constant(1)}};
        for (int k = 0; k < classes[i].order(); ++k) prod = prod * lin;
    }
    Symbol sq = symbol_of(Q);
    if (sq.b.size() != prod.b.size()) throw std::logic_error("principality_test: symbol degree");
    for (size_t k = 0; k < sq.b.size(); ++k)
        if (sq.b[k] != prod.b[k]) throw std::logic_error("principality_test: symbol mismatch");

    // Right divisibility by every original generator.
    for (size_t i = 0; i < l; ++i)
        for (const auto& b : classes[i].b) {
            LPDO L = LPDO::dx(tw) + as[i] * LPDO::dy(tw) + b.lift(tw) * LPDO::one(tw);
            if (!divide_by_first_order(Q, L).remainder.is_zero())
                throw std::logic_error("principality_test: generator divisibility failed");
        }

    return {true, Q, V, cert};
}

} // namespace fds
