#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fds/skew.hpp"

#include <random>

using namespace fds;

namespace {

DElement rnd_elem(const TowerPtr& t, std::mt19937& rng) {
    std::uniform_int_distribution<int> cd(-3, 3);
    return t->constant(cd(rng)) + Rat(cd(rng)) * t->x() + Rat(cd(rng)) * t->y();
}

SkewPoly rnd_skew(const TowerPtr& t, const SkewDeriv& d, std::mt19937& rng, int deg) {
    SkewPoly p(t, d);
    for (int i = 0; i <= deg; ++i) p.set_coeff(size_t(i), rnd_elem(t, rng));
    if (p.is_zero()) p.set_coeff(0, t->constant(1));
    return p;
}

} // namespace

TEST_CASE("F[E] product rule") {
    auto t = Tower::base();
    SkewDeriv d = SkewDeriv::mk_e(t->constant(1)); // E = d_x + d_y
    SkewPoly E = SkewPoly::theta(t, d);
    SkewPoly one = SkewPoly::constant(t, d, t->constant(1));
    // E∘(E+1) = E^2 + E since E(1) = 0
    SkewPoly P = E * (E + one);
    CHECK(P.coeff(2).is_one());
    CHECK(P.coeff(1).is_one());
    CHECK(P.coeff(0).is_zero());
    // E∘x = x E + 1 (E(x) = 1)
    SkewPoly Q = E * SkewPoly::constant(t, d, t->x());
    CHECK(Q.coeff(1) == t->x());
    CHECK(Q.coeff(0).is_one());
}

TEST_CASE("embedding into LPDO commutes with arithmetic") {
    auto t = Tower::base();
    std::mt19937 rng(3);
    SkewDeriv d = SkewDeriv::mk_e(t->x()); // E = d_x + x d_y
    for (int it = 0; it < 5; ++it) {
        SkewPoly a = rnd_skew(t, d, rng, 2), b = rnd_skew(t, d, rng, 1);
        CHECK((a * b).to_lpdo() == a.to_lpdo() * b.to_lpdo());
        CHECK((a + b).to_lpdo() == a.to_lpdo() + b.to_lpdo());
    }
}

TEST_CASE("skew division both sides") {
    auto t = Tower::base();
    std::mt19937 rng(7);
    SkewDeriv d = SkewDeriv::mk_dy();
    SkewPoly Dy = SkewPoly::theta(t, d);
    SkewPoly one = SkewPoly::constant(t, d, t->constant(1));

    SkewPoly q(t, d), r(t, d);
    SkewPoly::right_divmod(Dy * Dy + Dy, Dy + one, q, r);
    CHECK(r.is_zero());
    CHECK(q == Dy);
    SkewPoly::right_divmod(Dy, Dy, q, r);
    CHECK(q == one);
    CHECK(r.is_zero());

    for (int it = 0; it < 6; ++it) {
        SkewPoly A = rnd_skew(t, d, rng, 3), B = rnd_skew(t, d, rng, 2);
        SkewPoly::right_divmod(A, B, q, r);
        CHECK(q * B + r == A);
        CHECK(r.degree() < B.degree());
        SkewPoly::left_divmod(A, B, q, r);
        CHECK(B * q + r == A);
        CHECK(r.degree() < B.degree());
    }
}

TEST_CASE("gcrd and lclm") {
    auto t = Tower::base();
    std::mt19937 rng(13);
    SkewDeriv d = SkewDeriv::mk_dy();
    for (int it = 0; it < 5; ++it) {
        SkewPoly A = rnd_skew(t, d, rng, 1), B = rnd_skew(t, d, rng, 1);
        SkewPoly G = rnd_skew(t, d, rng, 1);
        SkewPoly g = SkewPoly::gcrd(A * G, B * G);
        SkewPoly q(t, d), r(t, d);
        // G right-divides the gcrd
        CHECK(g.degree() >= G.degree());
        SkewPoly::right_divmod(g, G, q, r);
        CHECK(r.is_zero());
        // and the gcrd right-divides both inputs
        SkewPoly::right_divmod(A * G, g, q, r);
        CHECK(r.is_zero());
        SkewPoly::right_divmod(B * G, g, q, r);
        CHECK(r.is_zero());

        SkewPoly U(t, d), V(t, d);
        SkewPoly L = SkewPoly::lclm(A, B, &U, &V);
        CHECK(U * A == L);
        CHECK(V * B == L);
        CHECK(L.lc().is_one());
    }
}

namespace {

// sparse draws: exact fraction normalization on dense random coefficients is
// correct but far too slow for a unit test
DElement sparse_elem(const TowerPtr& t, std::mt19937& rng) {
    switch (std::uniform_int_distribution<int>(0, 5)(rng)) {
        case 0: return t->constant(1);
        case 1: return t->constant(-2);
        case 2: return t->x();
        case 3: return t->y();
        case 4: return t->constant(0);
        default: return t->x() + t->constant(1);
    }
}

SkewPoly sparse_skew(const TowerPtr& t, const SkewDeriv& d, std::mt19937& rng, int deg) {
    SkewPoly p(t, d);
    for (int i = 0; i <= deg; ++i) p.set_coeff(size_t(i), sparse_elem(t, rng));
    if (p.is_zero()) p.set_coeff(0, t->constant(1));
    return p;
}

} // namespace

TEST_CASE("skew fractions form a ring") {
    auto t = Tower::base();
    std::mt19937 rng(19);
    SkewDeriv d = SkewDeriv::mk_dy();
    SkewPoly Dy = SkewPoly::theta(t, d);
    SkewFrac one = SkewFrac::from_poly(SkewPoly::constant(t, d, t->constant(1)));

    // (d_y^{-1} 1)(1^{-1} d_y) = 1
    SkewFrac invdy(SkewPoly::constant(t, d, t->constant(1)), Dy);
    CHECK(invdy * SkewFrac::from_poly(Dy) == one);
    CHECK(SkewFrac::from_poly(Dy) * invdy == one);

    for (int it = 0; it < 4; ++it) {
        SkewFrac a(sparse_skew(t, d, rng, 1), sparse_skew(t, d, rng, 1));
        SkewFrac b(sparse_skew(t, d, rng, 1), sparse_skew(t, d, rng, 1));
        SkewFrac c(sparse_skew(t, d, rng, 1), sparse_skew(t, d, rng, 1));
        CHECK(a + (-a) == SkewFrac(t));
        CHECK((a + b) * c == a * c + b * c);
        CHECK(a * (b + c) == a * b + a * c);
        CHECK((a * b) * c == a * (b * c));
        if (!a.is_zero()) {
            CHECK(a * a.inverse() == one);
            CHECK(a.inverse() * a == one);
        }
        // Leibniz rule for the d_x-action
        CHECK((a * b).dx_action() == a.dx_action() * b + a * b.dx_action());
    }
}

TEST_CASE("DxPoly division and denominator clearing") {
    auto t = Tower::base();
    LPDO Dx = LPDO::dx(t), Dy = LPDO::dy(t);

    DxPoly A = DxPoly::from_lpdo(Dx.pow(2)), B = DxPoly::from_lpdo(Dx);
    DxPoly q(t), r(t);
    DxPoly::divide_dx(A, B, q, r);
    CHECK(r.is_zero());
    CHECK(q == B);

    DxPoly::divide_dx(B, B, q, r);
    CHECK(r.is_zero());
    CHECK(q == DxPoly::from_lpdo(LPDO::one(t)));

    // A = d_x^2 + d_y d_x, B = d_x + 1
    DxPoly A2 = DxPoly::from_lpdo(Dx.pow(2) + Dy * Dx);
    DxPoly B2 = DxPoly::from_lpdo(Dx + LPDO::one(t));
    DxPoly::divide_dx(A2, B2, q, r);
    CHECK(q * B2 + r == A2);
    CHECK(r.degree() < B2.degree());

    // operators with y-dependent coefficients
    std::mt19937 rng(23);
    LPDO T = t->y() * (Dx * Dx) + (t->x() * t->y()) * (Dy * Dx) + t->x() * Dy + LPDO::one(t);
    LPDO L = t->y() * Dx + Dy;
    DxPoly dT = DxPoly::from_lpdo(T), dL = DxPoly::from_lpdo(L);
    DxPoly::divide_dx(dT, dL, q, r);
    CHECK(q * dL + r == dT);
    CHECK(r.degree() < 1);

    // clearing denominators recovers an exact left-fraction form
    auto [b, P] = q.clear_denominators();
    SkewFrac binv(SkewPoly::constant(t, SkewDeriv::mk_dy(), t->constant(1)), b);
    CHECK(binv * DxPoly::from_lpdo(P) == q);
}
