#include "fds/roots.hpp"

#include "fds/series.hpp"

#include <algorithm>
#include <set>

namespace fds {

namespace {

std::vector<Int> divisors(Int n) {
    if (n < 0) n = -n;
    std::vector<Int> ds;
    for (Int d = 1; d * d <= n; ++d) {
        if (n % d != 0) continue;
        ds.push_back(d);
        if (d * d != n) ds.push_back(n / d);
    }
    return ds;
}

// Nullspace basis over Q of a dense matrix.
std::vector<std::vector<Rat>> q_nullspace(std::vector<std::vector<Rat>> A, size_t n) {
    size_t m = A.size();
    std::vector<int> pivot_of_col(n, -1);
    size_t r = 0;
    for (size_t col = 0; col < n && r < m; ++col) {
        size_t piv = m;
        for (size_t i = r; i < m; ++i)
            if (A[i][col] != 0) { piv = i; break; }
        if (piv == m) continue;
        std::swap(A[r], A[piv]);
        Rat inv = Rat(1) / A[r][col];
        for (size_t j = col; j < n; ++j) A[r][j] *= inv;
        for (size_t i = 0; i < m; ++i) {
            if (i == r || A[i][col] == 0) continue;
            Rat f = A[i][col];
            for (size_t j = col; j < n; ++j) A[i][j] -= f * A[r][j];
        }
        pivot_of_col[col] = int(r);
        ++r;
    }
    std::vector<std::vector<Rat>> basis;
    for (size_t f = 0; f < n; ++f) {
        if (pivot_of_col[f] >= 0) continue;
        std::vector<Rat> v(n, 0);
        v[f] = 1;
        for (size_t c = 0; c < n; ++c)
            if (pivot_of_col[c] >= 0) v[c] = -A[size_t(pivot_of_col[c])][f];
        basis.push_back(std::move(v));
    }
    return basis;
}

} // namespace

std::vector<Rat> rational_roots(const std::vector<Rat>& coeffs) {
    // strip leading zeros
    std::vector<Rat> c = coeffs;
    while (!c.empty() && c.back() == 0) c.pop_back();
    std::vector<Rat> roots;
    if (c.size() <= 1) return roots;
    // common integer scaling
    Int den_lcm = 1;
    for (auto& v : c) {
        Int d = rat_den(v);
        den_lcm = den_lcm / boost::multiprecision::gcd(den_lcm, d) * d;
    }
    std::vector<Int> ic;
    for (auto& v : c) ic.push_back(rat_num(v) * (den_lcm / rat_den(v)));
    size_t low = 0;
    while (low < ic.size() && ic[low] == 0) ++low;
    if (low > 0) roots.push_back(0);
    if (low + 1 >= ic.size()) return roots;
    std::vector<Int> p(ic.begin() + long(low), ic.end());
    Int g = 0;
    for (auto& v : p) g = boost::multiprecision::gcd(g, v);
    for (auto& v : p) v /= g;
    auto eval = [&](const Rat& z) {
        Rat r = 0;
        for (size_t i = p.size(); i-- > 0;) r = r * z + Rat(p[i]);
        return r;
    };
    for (const Int& a : divisors(p.front()))
        for (const Int& b : divisors(p.back()))
            for (int s : {1, -1}) {
                Rat z(a * s, b);
                if (eval(z) == 0 && std::find(roots.begin(), roots.end(), z) == roots.end())
                    roots.push_back(z);
            }
    return roots;
}

std::vector<DElement> rational_function_roots(const UPoly& f) {
    std::vector<DElement> roots;
    if (f.degree() < 1) return roots;
    TowerPtr t = f.tower();
    for (int i = 0; i <= f.degree(); ++i)
        if (!f.coeff(size_t(i)).base_only()) return roots;

    // clear denominators to polynomial coefficients
    size_t n = size_t(f.degree());
    MPoly den(Rat(1));
    for (size_t i = 0; i <= n; ++i) den *= f.coeff(i).den();
    std::vector<MPoly> ps(n + 1);
    for (size_t i = 0; i <= n; ++i)
        ps[i] = f.coeff(i).num() * den.divide_exact(f.coeff(i).den());

    unsigned D = 0;
    for (auto& p : ps) D = std::max(D, p.total_degree());
    int N = int(2 * D + 2); // series order pinning A - Z*B of degree <= D to zero

    // sample points; union of verified roots over a few of them
    const std::pair<long, long> pts[] = {{2, 3}, {5, 7}, {3, -2}, {-4, 5}, {7, 11}, {1, 9}};
    auto seen = [&](const DElement& r) {
        for (auto& e : roots)
            if (e == r) return true;
        return false;
    };
    int good_points = 0;
    for (auto [x0l, y0l] : pts) {
        if (good_points >= 3) break;
        Rat x0(x0l), y0(y0l);
        std::vector<Rat> pv(n + 1);
        for (size_t i = 0; i <= n; ++i) pv[i] = ps[i].evaluate({x0, y0});
        if (pv[n] == 0) continue; // degree drop at this point
        ++good_points;
        auto evalp = [&](const std::vector<Rat>& cs, const Rat& z) {
            Rat r = 0;
            for (size_t i = cs.size(); i-- > 0;) r = r * z + cs[i];
            return r;
        };
        std::vector<Rat> dpv(n);
        for (size_t i = 1; i <= n; ++i) dpv[i - 1] = pv[i] * Rat(long(i));

        std::vector<TPS> cs_tps;
        for (auto& p : ps) cs_tps.push_back(expand_series(t->element(p), x0, y0, N));
        auto eval_tps = [&](const TPS& z) {
            TPS r = TPS::constant(0, x0, y0, N);
            for (size_t i = cs_tps.size(); i-- > 0;) r = r * z + cs_tps[i];
            return r;
        };
        auto eval_tps_d = [&](const TPS& z) {
            TPS r = TPS::constant(0, x0, y0, N);
            for (size_t i = cs_tps.size(); i-- > 1;) r = r * z + cs_tps[i] * Rat(long(i));
            return r;
        };

        for (const Rat& r0 : rational_roots(pv)) {
            if (evalp(dpv, r0) == 0) continue; // not simple at this point
            // Newton lifting to a series root
            TPS z = TPS::constant(r0, x0, y0, N);
            for (int it = 0; it < N + 2; ++it) {
                TPS val = eval_tps(z);
                if (val.is_zero()) break;
                z = z - val * eval_tps_d(z).inverse();
            }
            if (!eval_tps(z).is_zero()) continue;

            // linear reconstruction: A(X,Y) = Z * B(X,Y) through order N,
            // deg A, deg B <= D in the shifted coordinates
            std::vector<std::pair<int, int>> mons;
            for (int p = 0; p <= int(D); ++p)
                for (int q = 0; p + q <= int(D); ++q) mons.push_back({p, q});
            size_t M = mons.size();
            std::vector<std::vector<Rat>> sys;
            for (int p = 0; p <= N; ++p)
                for (int q = 0; p + q <= N; ++q) {
                    std::vector<Rat> row(2 * M, 0);
                    for (size_t k = 0; k < M; ++k) {
                        auto [i, j] = mons[k];
                        if (i == p && j == q) row[k] = 1;
                        if (i <= p && j <= q && (p - i) + (q - j) <= z.order())
                            row[M + k] = -z.coeff(p - i, q - j);
                    }
                    sys.push_back(std::move(row));
                }
            for (auto& v : q_nullspace(std::move(sys), 2 * M)) {
                MPoly A, B;
                MPoly xs = MPoly::var(0) - MPoly(x0);
                MPoly ys = MPoly::var(1) - MPoly(y0);
                for (size_t k = 0; k < M; ++k) {
                    auto [i, j] = mons[k];
                    if (v[k] != 0) A += MPoly(v[k]) * xs.pow(unsigned(i)) * ys.pow(unsigned(j));
                    if (v[M + k] != 0)
                        B += MPoly(v[M + k]) * xs.pow(unsigned(i)) * ys.pow(unsigned(j));
                }
                if (B.is_zero()) continue;
                DElement cand = t->element(A, B);
                if (!seen(cand) && f.eval(cand).is_zero()) roots.push_back(cand);
                break; // all nullspace vectors encode the same ratio
            }
        }
    }
    return roots;
}

} // namespace fds
