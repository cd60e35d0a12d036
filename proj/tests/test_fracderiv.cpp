#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fds/fracderiv.hpp"

#include <random>

using namespace fds;

namespace {

DElement rnd_elem(const TowerPtr& t, std::mt19937& rng) {
    std::uniform_int_distribution<int> cd(-2, 2);
    return t->constant(cd(rng)) + Rat(cd(rng)) * t->x() + Rat(cd(rng)) * t->y() +
           Rat(cd(rng)) * t->x() * t->y();
}

} // namespace

TEST_CASE("frac_derive follows the differentiation rule") {
    auto t = Tower::base();
    DElement f1 = t->x() * t->y(), f2 = t->x() + t->y();
    auto G = GSymbol::make(t, {f1, f2}, {Rat(1, 2)});
    CHECK(G->q == 2);

    DElement h = t->x();
    FracElement e = FracElement::term(G, Rat(0), h);
    FracElement d = e.derive(Var::X);
    // d_x(hG) = (d_x h)G + h(d_x f2)G^(1/2) + h(d_x f1)G^(1)
    CHECK(d.coeff(Rat(0)) == h.derive(Var::X));
    CHECK(d.coeff(Rat(1, 2)) == h * f2.derive(Var::X));
    CHECK(d.coeff(Rat(1)) == h * f1.derive(Var::X));

    // k0 = 1: d_x(G^(s)) = (d_x f1) G^(1+s)
    auto G1 = GSymbol::make(t, {f1});
    CHECK(G1->q == 1);
    FracElement ds = FracElement::term(G1, Rat(3), t->constant(1)).derive(Var::X);
    CHECK(ds.terms().size() == 1);
    CHECK(ds.coeff(Rat(4)) == f1.derive(Var::X));

    // commutation of the derivations on random elements
    std::mt19937 rng(11);
    for (int it = 0; it < 4; ++it) {
        auto Gr = GSymbol::make(t, {rnd_elem(t, rng), rnd_elem(t, rng)}, {Rat(1, 3)});
        FracElement r = FracElement::term(Gr, Rat(it), rnd_elem(t, rng)) +
                        FracElement::term(Gr, Rat(it) - Rat(1, 3), rnd_elem(t, rng));
        CHECK(r.derive(Var::X).derive(Var::Y) == r.derive(Var::Y).derive(Var::X));
    }
}

TEST_CASE("expand_apply by iterated rule") {
    auto t = Tower::base();
    DElement f1 = t->x() * t->x() * t->y(), h = t->x() + t->y() * t->y();
    auto G = GSymbol::make(t, {f1});
    LPDO Dx = LPDO::dx(t), Dy = LPDO::dy(t);

    FracElement e = expand_apply(Dx * Dy, h, Rat(0), G);
    DElement fx = f1.derive(Var::X), fy = f1.derive(Var::Y);
    DElement hx = h.derive(Var::X), hy = h.derive(Var::Y);
    CHECK(e.coeff(Rat(0)) == hx.derive(Var::Y));
    CHECK(e.coeff(Rat(1)) == hx * fy + hy * fx + h * fx.derive(Var::Y));
    CHECK(e.coeff(Rat(2)) == h * fx * fy);

    CHECK(expand_apply(LPDO::one(t), h, Rat(5), G) == FracElement::term(G, Rat(5), h));

    // (d_x + d_y) f1 = 0 makes the G^(2) coefficient h*symb(T) vanish
    DElement g1 = t->x() - t->y();
    auto Gc = GSymbol::make(t, {g1});
    LPDO T = Dx * Dx + Rat(2) * t->constant(1) * (Dx * Dy) + Dy * Dy + Dx;
    FracElement ec = expand_apply(T, h, Rat(0), Gc);
    CHECK(ec.coeff(Rat(2)).is_zero());
    CHECK(!ec.coeff(Rat(1)).is_zero());
}

TEST_CASE("closed formula agrees with the iterated rule") {
    auto t = Tower::base();
    LPDO Dx = LPDO::dx(t), Dy = LPDO::dy(t);
    DElement f1 = t->x() * t->x() * t->y(), h = t->x() + t->y() * t->y();
    auto G = GSymbol::make(t, {f1});

    CHECK(expand_apply_closed(Dx * Dy, h, Rat(0), G) == expand_apply(Dx * Dy, h, Rat(0), G));
    CHECK(expand_apply_closed(LPDO::one(t), h, Rat(5), G) ==
          expand_apply(LPDO::one(t), h, Rat(5), G));
    LPDO T0 = Dx * Dx + Rat(2) * t->constant(1) * (Dx * Dy) + Dy * Dy + Dx;
    auto Gc = GSymbol::make(t, {t->x() - t->y()});
    CHECK(expand_apply_closed(T0, h, Rat(0), Gc) == expand_apply(T0, h, Rat(0), Gc));

    // binomial case: coefficient of G^(1) in d_x^2(hG)
    FracElement e2 = expand_apply_closed(Dx * Dx, h, Rat(0), G);
    DElement fx = f1.derive(Var::X), hx = h.derive(Var::X);
    CHECK(e2.coeff(Rat(1)) == Rat(2) * hx * fx + h * fx.derive(Var::X));

    // first order, k0 = 2: Definition 1 verbatim
    auto G2 = GSymbol::make(t, {f1, t->x() + t->y()}, {Rat(1, 2)});
    CHECK(expand_apply_closed(Dx, h, Rat(0), G2) ==
          FracElement::term(G2, Rat(0), h).derive(Var::X));

    // random operators of order <= 3, k0 <= 2
    std::mt19937 rng(23);
    for (int it = 0; it < 3; ++it) {
        LPDO T(t);
        for (unsigned i = 0; i + 0 <= 3; ++i)
            for (unsigned j = 0; i + j <= 3; ++j) T.set_coeff(i, j, rnd_elem(t, rng));
        auto Gr = it == 0 ? GSymbol::make(t, {rnd_elem(t, rng)})
                          : GSymbol::make(t, {rnd_elem(t, rng), rnd_elem(t, rng)}, {Rat(1, 2)});
        DElement hr = rnd_elem(t, rng);
        CHECK(expand_apply_closed(T, hr, Rat(0), Gr) == expand_apply(T, hr, Rat(0), Gr));
    }
}

TEST_CASE("top coefficient is h times the symbol on grad f1") {
    auto t = Tower::base();
    std::mt19937 rng(37);
    LPDO Dx = LPDO::dx(t), Dy = LPDO::dy(t);
    for (int it = 0; it < 3; ++it) {
        LPDO T(t);
        for (unsigned i = 0; i <= 3; ++i)
            for (unsigned j = 0; i + j <= 3; ++j) T.set_coeff(i, j, rnd_elem(t, rng));
        T.set_coeff(3, 0, t->constant(1) + T.coeff(3, 0) * T.coeff(3, 0)); // keep order 3
        DElement f1 = rnd_elem(t, rng), h = rnd_elem(t, rng);
        auto G = GSymbol::make(t, {f1});
        FracElement e = expand_apply(T, h, Rat(0), G);
        Symbol sy = symbol_of(T);
        CHECK(e.coeff(Rat(3)) == h * sy.eval(f1.derive(Var::X), f1.derive(Var::Y)));
    }
}

TEST_CASE("specialization") {
    auto t = Tower::base();
    auto G = GSymbol::make(t, {t->x() * t->y()});

    std::map<Rat, Rat> c;
    for (int i = -4; i <= 6; ++i) c[Rat(i)] = (i == 0) ? 1 : 0;
    std::vector<Rat> exps;
    for (int s = -3; s <= 1; ++s) exps.push_back(Rat(s));
    auto sp = specialize(G, c, 3, exps);
    for (int j = 0; j <= 3; ++j) {
        const TPS& g = sp.at(Rat(-j));
        for (int k = 0; k <= 3; ++k)
            CHECK(g.coeff(k, 0) == (k == j ? Rat(1) / Rat(k == 0 ? 1 : (k == 1 ? 1 : (k == 2 ? 2 : 6))) : Rat(0)));
    }
    CHECK(sp.at(Rat(1)).is_zero());

    // c_{-2} = 2 puts 2 f1^2/2! = f1^2 into G^(0)
    std::map<Rat, Rat> c2 = c;
    c2[Rat(-2)] = 2;
    auto sp2 = specialize(G, c2, 3, {Rat(0)});
    CHECK(sp2.at(Rat(0)).coeff(2, 0) == Rat(1));

    // missing constant is an error
    CHECK_THROWS_AS(specialize(G, {{Rat(0), Rat(1)}}, 2, {Rat(0)}), std::invalid_argument);

    // differentiation rule holds through the truncation, random constants
    auto G2 = GSymbol::make(t, {t->x(), t->y()}, {Rat(1, 2)});
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> cd(-3, 3);
    std::map<Rat, Rat> cr;
    for (int i = -20; i <= 20; ++i) cr[Rat(i, 2)] = cd(rng);
    std::vector<Rat> exps2 = {Rat(0), Rat(1, 2), Rat(1), Rat(3, 2), Rat(2)};
    auto sp3 = specialize(G2, cr, 4, exps2);
    for (const Rat& s : {Rat(0), Rat(1, 2), Rat(1)}) {
        // d/df1 G^(s) = G^(s+1), d/df2 G^(s) = G^(s+1/2)
        CHECK(sp3.at(s).derive(Var::X).agrees_with(sp3.at(s + 1)));
        CHECK(sp3.at(s).derive(Var::Y).agrees_with(sp3.at(s + Rat(1, 2))));
    }
}

TEST_CASE("characteristic jet extensions") {
    auto t = Tower::base();

    // d_x f = -d_y f
    auto je = adjoin_characteristic(t, "f", t->constant(-1), t->constant(0), t->constant(0),
                                    Var::Y, 4);
    CHECK(je.jet(1).derive(Var::X) == -je.jet(2));

    // d_x f = -x d_y f: d_x(d_y f) = d_y(-x d_y f) = -x d_y^2 f
    auto je2 = adjoin_characteristic(t, "g", -t->x(), t->constant(0), t->constant(0), Var::Y, 4);
    CHECK(je2.jet(1).derive(Var::X) == -t->x() * je2.jet(2));

    // inhomogeneous source: d_x f2 = -d_y f2 + i with i^2 = -1
    auto ai = t->adjoin_algebraic("i", {t->constant(1), t->constant(0)});
    auto je3 = adjoin_characteristic(ai.tower, "f2", ai.tower->constant(-1),
                                     ai.tower->constant(0), ai.elem, Var::Y, 3);
    CHECK(je3.f().derive(Var::X) == -je3.jet(1) + ai.elem.lift(je3.tower));
    CHECK(je3.jet(1).derive(Var::X) == -je3.jet(2)); // d_y i = 0
}

TEST_CASE("verify_series") {
    auto t = Tower::base();
    LPDO Dx = LPDO::dx(t), Dy = LPDO::dy(t);
    LPDO L = Dx + Dy;
    LPDO T = (Dx + t->x() * LPDO::one(t)) * L;
    auto G = GSymbol::make(t, {t->x() - t->y()}); // L(f1) = 0

    FracSeries S{G, Rat(0), {t->constant(1)}, 0};
    auto v = verify_series(T, S, 3);
    CHECK(v.verified_depth == 3);
    CHECK(!v.first_fail);

    FracSeries bad{G, Rat(0), {t->x()}, 0};
    auto vb = verify_series(T, bad, 3);
    CHECK(vb.verified_depth == 1); // the symbol exponent still vanishes
    REQUIRE(vb.first_fail.has_value());
    CHECK(*vb.first_fail == Rat(1));
}
