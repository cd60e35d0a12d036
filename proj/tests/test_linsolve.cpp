#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fds/linsolve.hpp"

#include <random>

using namespace fds;

TEST_CASE("solve a 2x2 system over Q(x,y)") {
    auto t = Tower::base();
    DElement x = t->x(), y = t->y(), one = t->constant(1);
    // [x 1; 1 y] * v = [x+1; y+1]  ->  v = (1,1) when xy != 1
    DMat A = {{x, one}, {one, y}};
    DVec b = {x + one, y + one};
    auto v = lin_solve(A, b, t);
    REQUIRE(v);
    CHECK((*v)[0] == one);
    CHECK((*v)[1] == one);
    CHECK(lin_rank(A, t) == 2);
}

TEST_CASE("inconsistent and underdetermined systems") {
    auto t = Tower::base();
    DElement x = t->x(), one = t->constant(1);
    DMat A = {{one, x}, {one, x}};
    CHECK(lin_rank(A, t) == 1);
    CHECK(!lin_solve(A, {one, one + one}, t));
    auto v = lin_solve(A, {x, x}, t);
    REQUIRE(v);
    CHECK((*v)[0] + x * (*v)[1] == x);
    auto ns = lin_nullspace(A, t);
    REQUIRE(ns.size() == 1);
    CHECK(ns[0][0] + x * ns[0][1] == t->constant(0));
}

TEST_CASE("zero tests respect algebraic relations") {
    auto t = Tower::base();
    DElement x = t->x();
    auto adj = t->adjoin_algebraic("z", {-x, t->constant(0)});
    auto tz = adj.tower;
    DElement z = adj.elem;
    // z^2 - x is the zero element: the matrix has rank 1, not 2
    DMat A = {{z * z - x.lift(tz), tz->constant(1)}, {tz->constant(0), tz->constant(1)}};
    CHECK(lin_rank(A, tz) == 1);
    auto ns = lin_nullspace(A, tz);
    REQUIRE(ns.size() == 1);
    CHECK(ns[0][1].is_zero());
}

TEST_CASE("random consistency: A * solve(A,b) == b") {
    auto t = Tower::base();
    std::mt19937 rng(17);
    std::uniform_int_distribution<int> cd(-3, 3);
    auto rnd = [&] {
        return t->constant(cd(rng)) + Rat(cd(rng)) * t->x() + Rat(cd(rng)) * t->y();
    };
    for (int it = 0; it < 10; ++it) {
        size_t n = 3;
        DMat A(n, DVec(n));
        DVec xs(n);
        for (auto& e : xs) e = rnd();
        for (auto& row : A)
            for (auto& e : row) e = rnd();
        DVec b(n, t->constant(0));
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) b[i] = b[i] + A[i][j] * xs[j];
        auto v = lin_solve(A, b, t);
        REQUIRE(v);
        for (size_t i = 0; i < n; ++i) {
            DElement acc = t->constant(0);
            for (size_t j = 0; j < n; ++j) acc = acc + A[i][j] * (*v)[j];
            CHECK(acc == b[i]);
        }
        // nullspace vectors really annihilate A
        for (auto& w : lin_nullspace(A, t))
            for (size_t i = 0; i < n; ++i) {
                DElement acc = t->constant(0);
                for (size_t j = 0; j < n; ++j) acc = acc + A[i][j] * w[j];
                CHECK(acc.is_zero());
            }
    }
}
