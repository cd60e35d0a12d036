#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fds/series.hpp"

#include <random>

using namespace fds;

TEST_CASE("geometric series") {
    auto t = Tower::base();
    DElement a = t->constant(1) / (t->constant(1) - t->x());
    TPS s = expand_series(a, 0, 0, 3);
    CHECK(s.coeff(0, 0) == 1);
    CHECK(s.coeff(1, 0) == 1);
    CHECK(s.coeff(2, 0) == 1);
    CHECK(s.coeff(3, 0) == 1);
    CHECK(s.coeff(0, 1) == 0);
}

TEST_CASE("expansion at a shifted center") {
    auto t = Tower::base();
    // x*y at (1,1) = 1 + (x-1) + (y-1) + (x-1)(y-1)
    TPS s = expand_series(t->x() * t->y(), 1, 1, 2);
    CHECK(s.coeff(0, 0) == 1);
    CHECK(s.coeff(1, 0) == 1);
    CHECK(s.coeff(0, 1) == 1);
    CHECK(s.coeff(1, 1) == 1);
    CHECK(s.coeff(2, 0) == 0);
}

TEST_CASE("pole detection") {
    auto t = Tower::base();
    CHECK_THROWS(expand_series(t->constant(1) / t->x(), 0, 0, 3));
    CHECK_NOTHROW(expand_series(t->constant(1) / t->x(), 1, 0, 3));
}

TEST_CASE("product property on random elements") {
    auto t = Tower::base();
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> cd(-4, 4);
    auto rnd = [&] {
        DElement e = t->constant(cd(rng));
        e = e + Rat(cd(rng)) * t->x() + Rat(cd(rng)) * t->y();
        e = e + Rat(cd(rng)) * t->x() * t->y() + Rat(cd(rng)) * t->x() * t->x();
        return e + Rat(1); // keep it likely nonzero at (0,0)
    };
    int done = 0;
    for (int it = 0; it < 30 && done < 15; ++it) {
        DElement a = rnd(), b = rnd(), d1 = rnd(), d2 = rnd();
        if (d1.is_zero() || d2.is_zero()) continue;
        DElement u = a / d1, v = b / d2;
        Rat d1v = d1.num().evaluate({0, 0}) / d1.den().evaluate({0, 0});
        Rat d2v = d2.num().evaluate({0, 0}) / d2.den().evaluate({0, 0});
        if (d1v == 0 || d2v == 0) continue;
        TPS su = expand_series(u, 0, 0, 6), sv = expand_series(v, 0, 0, 6);
        TPS prod = expand_series(u * v, 0, 0, 6);
        CHECK(prod.agrees_with(su * sv));
        ++done;
    }
    CHECK(done >= 10);
}

TEST_CASE("derivative matches element derivative") {
    auto t = Tower::base();
    DElement a = (t->x() + t->y() * t->y()) / (t->constant(2) + t->x());
    TPS s = expand_series(a, 0, 0, 5);
    CHECK(s.derive(Var::X).agrees_with(expand_series(a.derive(Var::X), 0, 0, 4)));
    CHECK(s.derive(Var::Y).agrees_with(expand_series(a.derive(Var::Y), 0, 0, 4)));
    CHECK(s.derive(Var::X).order() == 4);
}

TEST_CASE("inverse and precision tracking") {
    Rat z = 0;
    TPS one = TPS::constant(1, z, z, 4);
    TPS s = one + TPS::var_x(z, z, 4) * TPS::var_y(z, z, 4);
    TPS si = s.inverse();
    CHECK((s * si).agrees_with(one));
    CHECK(s.truncate(2).order() == 2);
    CHECK_THROWS(s.truncate(9));
    CHECK_THROWS(s.coeff(3, 2));
}

TEST_CASE("formal generator expansions are caller-supplied") {
    auto t = Tower::base();
    auto adj = t->adjoin_differential("u", t->y(), t->x()); // u behaves like x*y
    DElement u = adj.elem;
    CHECK_THROWS(expand_series(u + Rat(1), 0, 0, 3));
    std::map<size_t, TPS> jets;
    jets[adj.index] = expand_series(t->x() * t->y(), 0, 0, 3);
    TPS s = expand_series(u * u + Rat(1), 0, 0, 3, jets);
    CHECK(s.coeff(0, 0) == 1);
    CHECK(s.coeff(1, 1) == 0); // u^2 = x^2 y^2 starts at degree 4
}
