#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fds/factor.hpp"

#include <random>

using namespace fds;

namespace {

DElement lin_elem(const TowerPtr& t, std::mt19937& rng) {
    std::uniform_int_distribution<int> cd(-2, 2);
    return t->constant(cd(rng)) + Rat(cd(rng)) * t->x() + Rat(cd(rng)) * t->y();
}

LPDO first_order(const TowerPtr& t, const DElement& a, const DElement& b) {
    return LPDO::dx(t) + a * LPDO::dy(t) + b * LPDO::one(t);
}

} // namespace

TEST_CASE("disc2 on the three reference operators") {
    auto t = Tower::base();
    LPDO Dx = LPDO::dx(t), Dy = LPDO::dy(t);
    LPDO E2 = Dx * Dx + Rat(2) * t->constant(1) * (Dx * Dy) + Dy * Dy;

    auto r0 = disc2((LPDO::dx(t) + LPDO::dy(t) + t->x() * LPDO::one(t)) * (Dx + Dy));
    CHECK(r0.a.is_one());
    CHECK(r0.disc.is_zero());
    CHECK(r0.b01 == t->x());
    CHECK(r0.b10 == t->x());

    auto rm = disc2(E2 + Dy);
    CHECK(rm.disc == t->constant(-1));

    auto rp = disc2(E2 + Dx);
    CHECK(rp.disc == t->constant(1));

    CHECK_THROWS_AS(disc2(Dx * Dx - Dy * Dy), std::domain_error);
    CHECK_THROWS_AS(disc2(Dx + Dy), std::domain_error);
}

TEST_CASE("disc2 identity on random coefficients, with a unit") {
    auto t = Tower::base();
    std::mt19937 rng(71);
    std::uniform_int_distribution<int> cd(-2, 2);
    auto rnd2 = [&] {
        DElement e = t->constant(cd(rng));
        e = e + Rat(cd(rng)) * t->x() + Rat(cd(rng)) * t->y();
        e = e + Rat(cd(rng)) * t->x() * t->y() + Rat(cd(rng)) * t->x() * t->x();
        return e;
    };
    for (int it = 0; it < 4; ++it) {
        DElement a = rnd2(), b01 = rnd2(), b10 = rnd2(), b00 = rnd2();
        LPDO T = LPDO::monomial(t, 2, 0, t->constant(1)) +
                 LPDO::monomial(t, 1, 1, Rat(2) * a) + LPDO::monomial(t, 0, 2, a * a) +
                 LPDO::monomial(t, 1, 0, b01) + LPDO::monomial(t, 0, 1, b10) +
                 LPDO::monomial(t, 0, 0, b00);
        // the defining identity is verified inside disc2; also pin the formula
        auto r = disc2(T);
        CHECK(r.disc == a.derive(Var::X) + a * a.derive(Var::Y) + a * b01 - b10);
        // a leading unit is normalized away
        auto ru = disc2((t->constant(3) + t->x() * t->x()) * T);
        CHECK(ru.disc == r.disc);
        CHECK(ru.a == r.a);
    }
}

TEST_CASE("irreducible2") {
    auto t = Tower::base();
    LPDO Dx = LPDO::dx(t), Dy = LPDO::dy(t);
    LPDO E = Dx + Dy;
    LPDO E2 = Dx * Dx + Rat(2) * t->constant(1) * (Dx * Dy) + Dy * Dy;

    LPDO T0 = (E + t->x() * LPDO::one(t)) * E;
    auto v0 = irreducible2(T0);
    CHECK(v0.reducible);
    REQUIRE(v0.factors);
    CHECK(v0.factors->first * v0.factors->second == T0);
    CHECK(v0.factors->second == E);

    CHECK(!irreducible2(E2 + Dy).reducible);
    CHECK(!irreducible2(E2 + Dx).reducible);
}

TEST_CASE("right_factor_search on the reference operators") {
    auto t = Tower::base();
    LPDO Dx = LPDO::dx(t), Dy = LPDO::dy(t);
    LPDO E = Dx + Dy;

    auto c1 = right_factor_search((E + t->x() * LPDO::one(t)) * E, 1);
    REQUIRE(c1.size() == 1);
    CHECK(c1[0].b.is_zero());
    CHECK(c1[0].cofactor * c1[0].L == (E + t->x() * LPDO::one(t)) * E);

    auto c2 = right_factor_search(Dx * Dx + Rat(2) * t->constant(1) * (Dx * Dy) + Dy * Dy + Dy);
    CHECK(c2.empty());

    auto c3 = right_factor_search(Dx * Dx - Dy * Dy);
    REQUIRE(c3.size() == 2);
    for (const auto& c : c3) {
        CHECK(c.b.is_zero());
        CHECK(c.cofactor * c.L == Dx * Dx - Dy * Dy);
    }
}

TEST_CASE("left_factor_search") {
    auto t = Tower::base();
    LPDO Dx = LPDO::dx(t), Dy = LPDO::dy(t);
    LPDO E = Dx + Dy;

    LPDO T = E * (E + t->x() * LPDO::one(t));
    auto ls = left_factor_search(T);
    REQUIRE(ls.size() == 1);
    CHECK(ls[0].b.is_zero());
    CHECK(!ls[0].right);
    CHECK(ls[0].L * ls[0].cofactor == T);

    CHECK(left_factor_search(Dx * Dx - Dy * Dy).size() == 2);
    CHECK(left_factor_search(Dx * Dx + Rat(2) * t->constant(1) * (Dx * Dy) + Dy * Dy + Dy)
              .empty());
}

TEST_CASE("factor_up_to_order3 recovers a full linear factorization") {
    auto t = Tower::base();
    LPDO Dx = LPDO::dx(t), Dy = LPDO::dy(t);
    LPDO E = Dx + Dy;
    LPDO T = (E + t->x() * LPDO::one(t)) * E * (Dx - Dy);

    auto f = factor_up_to_order3(T);
    REQUIRE(f.factors.size() == 3);
    for (const auto& g : f.factors) CHECK(g.order() == 1);
    LPDO prod = f.factors[0] * f.factors[1] * f.factors[2];
    CHECK(prod == T);

    auto single = factor_up_to_order3(Dx * Dx + Rat(2) * t->constant(1) * (Dx * Dy) + Dy * Dy + Dx);
    CHECK(single.factors.size() == 1);
    CHECK(single.certified_bound[0]);

    auto one = factor_up_to_order3(Dx + t->y() * LPDO::one(t));
    CHECK(one.factors.size() == 1);
    CHECK(one.factors[0].order() == 1);

    CHECK_THROWS_AS(factor_up_to_order3(E.pow(4)), std::invalid_argument);
}

TEST_CASE("factoring corpus of random first-order products") {
    auto t = Tower::base();
    std::mt19937 rng(83);
    std::uniform_int_distribution<int> cd(-2, 2);
    for (int it = 0; it < 6; ++it) {
        int nf = 2 + (it % 2);
        std::vector<LPDO> fac;
        LPDO T = LPDO::one(t);
        static const int dirs[3] = {1, -1, 2}; // distinct constant directions
        for (int k = 0; k < nf; ++k) {
            fac.push_back(first_order(t, t->constant(dirs[k]), lin_elem(t, rng)));
            T = T * fac.back();
        }
        auto f = factor_up_to_order3(T);
        REQUIRE(int(f.factors.size()) == nf);
        LPDO prod = LPDO::one(t);
        for (const auto& g : f.factors) prod = prod * g;
        CHECK(prod == T);
    }
}

TEST_CASE("irreducible2 agrees with the factor search on a corpus") {
    auto t = Tower::base();
    std::mt19937 rng(97);
    std::uniform_int_distribution<int> cn(1, 3);
    for (int it = 0; it < 3; ++it) {
        DElement a = t->constant(cn(rng));
        LPDO E = LPDO::dx(t) + a * LPDO::dy(t);
        LPDO Tred = (E + lin_elem(t, rng) * LPDO::one(t)) * (E + lin_elem(t, rng) * LPDO::one(t));
        CHECK(disc2(Tred).disc.is_zero());
        CHECK(!right_factor_search(Tred, 2).empty());

        LPDO Tirr = E * E + t->constant(cn(rng)) * LPDO::dy(t);
        CHECK(!disc2(Tirr).disc.is_zero());
        CHECK(right_factor_search(Tirr, 2).empty());
    }
}

TEST_CASE("an algebraic direction is adjoined when the symbol does not split") {
    auto t = Tower::base();
    LPDO Dx = LPDO::dx(t), Dy = LPDO::dy(t);
    LPDO T = Dx * Dx + Dy * Dy; // needs i
    auto cs = right_factor_search(T);
    REQUIRE(!cs.empty());
    for (const auto& c : cs) {
        CHECK(c.b.is_zero());
        CHECK(c.cofactor * c.L == T.lift(c.L.tower()));
    }
}

TEST_CASE("separable_prepare at an admissible center") {
    auto t = Tower::base();
    LPDO T = LPDO::dx(t) * LPDO::dx(t) - LPDO::dy(t) * LPDO::dy(t);
    auto data = separable_prepare(T, 0, 0, 6);
    REQUIRE(data.a.size() == 2);
    // directions +1 and -1 with f = y +- x, h = 1
    for (size_t i = 0; i < 2; ++i) {
        Rat av = data.a[i].rational_value();
        CHECK((av == 1 || av == -1));
        CHECK(data.f[i].coeff(0, 1) == 1);
        CHECK(data.f[i].coeff(1, 0) == av);
        CHECK(data.f[i].coeff(0, 0) == 0);
        CHECK(data.f[i].coeff(2, 0) == 0);
        CHECK((data.h[i] - TPS::constant(1, 0, 0, 6)).is_zero());
    }
    CHECK(data.a[0].rational_value() != data.a[1].rational_value());

    // x-dependent direction: nonlinear characteristic series
    LPDO Tx = LPDO::dx(t) * LPDO::dx(t) - (t->x() * t->x()) * (LPDO::dy(t) * LPDO::dy(t));
    auto dx1 = separable_prepare(Tx, 1, 0, 6);
    size_t ip = dx1.a[0] == t->x() ? 0 : 1;
    CHECK(dx1.a[ip] == t->x());
    CHECK(dx1.f[ip].coeff(1, 0) == 1);
    CHECK(dx1.f[ip].coeff(2, 0) == Rat(1, 2));

    // center on the symbol-discriminant locus
    CHECK_THROWS_AS(separable_prepare(Tx, 0, 0, 4), std::domain_error);
    // coefficient pole at the center
    LPDO Tp = T + t->x().inverse() * LPDO::dx(t);
    CHECK_THROWS_AS(separable_prepare(Tp, 0, 0, 4), std::domain_error);
    // non-separable input
    LPDO E = LPDO::dx(t) + LPDO::dy(t);
    CHECK_THROWS_AS(separable_prepare(E * E, 0, 0, 4), std::domain_error);
}

TEST_CASE("separable_reconstruct recovers polynomial solutions") {
    auto t = Tower::base();
    LPDO T = LPDO::dx(t) * LPDO::dx(t) - LPDO::dy(t) * LPDO::dy(t);
    auto data = separable_prepare(T, 0, 0, 8);
    int ip = data.a[0].rational_value() == 1 ? 0 : 1;
    int im = 1 - ip;

    TPS X = TPS::var_x(0, 0, 8), Y = TPS::var_y(0, 0, 8);

    // (x+y)^2 = 2 * f_+^2 / 2!
    auto r1 = separable_reconstruct(T, (X + Y) * (X + Y), data, 8);
    CHECK(r1.residual.is_zero());
    CHECK(r1.c[{2, ip}] == 2);
    for (const auto& [ki, v] : r1.c)
        if (!(ki.first == 2 && ki.second == ip)) CHECK(v == 0);

    // constant solution: only the k = 0 layer, split between the directions
    auto r2 = separable_reconstruct(T, TPS::constant(1, 0, 0, 8), data, 8);
    CHECK(r2.residual.is_zero());
    CHECK(r2.c[{0, 0}] + r2.c[{0, 1}] == 1);

    // x^2 + y^2
    auto r3 = separable_reconstruct(T, X * X + Y * Y, data, 8);
    CHECK(r3.residual.is_zero());
    CHECK(r3.c[{2, ip}] == 1);
    CHECK(r3.c[{2, im}] == 1);

    // random polynomial solutions F(x+y) + G(x-y), degree <= 6
    std::mt19937 rng(29);
    std::uniform_int_distribution<int> cd(-3, 3);
    for (int it = 0; it < 3; ++it) {
        TPS sol = TPS::constant(0, 0, 0, 8);
        TPS u = X + Y, v = X - Y;
        TPS pu = TPS::constant(1, 0, 0, 8), pv = pu;
        for (int d = 0; d <= 6; ++d) {
            sol += Rat(cd(rng)) * pu + Rat(cd(rng)) * pv;
            pu *= u;
            pv *= v;
        }
        auto r = separable_reconstruct(T, sol, data, 8);
        CHECK(r.residual.is_zero());
        CHECK((r.sum - sol).is_zero());

        // idempotence: reconstructing the produced sum returns the same table
        auto rr = separable_reconstruct(T, r.sum.truncate(8), data, 8);
        CHECK(rr.c == r.c);
    }

    // a non-solution is rejected
    CHECK_THROWS_AS(separable_reconstruct(T, X * X, data, 8), std::invalid_argument);
}
