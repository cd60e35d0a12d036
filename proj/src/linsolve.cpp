#include "fds/linsolve.hpp"

namespace fds {

namespace {

// Fraction-free Gaussian elimination over the polynomial representation of
// tower elements. Zero tests must go through the tower (a polynomial can be
// nonzero while the element it denotes vanishes in an algebraic extension).

struct Echelon {
    std::vector<std::vector<MPoly>> rows;
    std::vector<int> pivot_col; // per pivot row
    size_t ncols = 0;
};

bool elem_zero(const TowerPtr& t, const MPoly& p) {
    if (p.is_zero()) return true;
    return t->element(p).is_zero();
}

// Divide a row by the gcd of its entries to keep sizes down. If the content
// vanishes as a tower element the whole row is zero; clear it.
void strip_row(const TowerPtr& t, std::vector<MPoly>& row) {
    MPoly g;
    for (auto& e : row) {
        if (e.is_zero()) continue;
        g = g.is_zero() ? e.ipp() : MPoly::gcd(g, e);
        if (g.is_constant()) break;
    }
    if (g.is_zero()) return;
    if (elem_zero(t, g)) {
        for (auto& e : row) e = MPoly();
        return;
    }
    if (g.is_constant()) {
        for (auto& e : row) e = e * (Rat(1) / g.constant_value());
        return;
    }
    for (auto& e : row) e = e.is_zero() ? e : e.divide_exact(g);
}

Echelon eliminate(const DMat& A, const DVec* b, const TowerPtr& t) {
    size_t m = A.size();
    size_t n = m ? A[0].size() : 0;
    Echelon E;
    E.ncols = n + (b ? 1 : 0);
    E.rows.assign(m, std::vector<MPoly>(E.ncols));
    for (size_t i = 0; i < m; ++i) {
        if (A[i].size() != n) throw std::invalid_argument("linsolve: ragged matrix");
        // clear denominators across the row
        MPoly den(Rat(1));
        for (auto& e : A[i]) den *= e.den();
        if (b) den *= (*b)[i].den();
        for (size_t j = 0; j < n; ++j)
            E.rows[i][j] = A[i][j].num() * den.divide_exact(A[i][j].den());
        if (b) E.rows[i][n] = (*b)[i].num() * den.divide_exact((*b)[i].den());
        strip_row(t, E.rows[i]);
    }

    size_t r = 0;
    for (size_t col = 0; col < E.ncols && r < m; ++col) {
        // pick the shortest usable pivot
        size_t best = m;
        for (size_t i = r; i < m; ++i) {
            if (elem_zero(t, E.rows[i][col])) continue;
            if (best == m || E.rows[i][col].terms().size() < E.rows[best][col].terms().size())
                best = i;
        }
        if (best == m) continue;
        std::swap(E.rows[r], E.rows[best]);
        for (size_t i = r + 1; i < m; ++i) {
            if (E.rows[i][col].is_zero()) continue;
            MPoly f = E.rows[i][col];
            for (size_t j = 0; j < E.ncols; ++j)
                E.rows[i][j] = E.rows[i][j] * E.rows[r][col] - E.rows[r][j] * f;
            strip_row(t, E.rows[i]);
        }
        E.pivot_col.push_back(int(col));
        ++r;
    }
    return E;
}

} // namespace

int lin_rank(const DMat& A, const TowerPtr& t) {
    return int(eliminate(A, nullptr, t).pivot_col.size());
}

std::optional<DVec> lin_solve(const DMat& A, const DVec& b, const TowerPtr& t) {
    size_t n = A.empty() ? 0 : A[0].size();
    if (A.size() != b.size()) throw std::invalid_argument("lin_solve: size mismatch");
    Echelon E = eliminate(A, &b, t);
    for (int pc : E.pivot_col)
        if (size_t(pc) == n) return std::nullopt; // pivot in the rhs column
    DVec x(n, t->constant(0));
    for (int k = int(E.pivot_col.size()) - 1; k >= 0; --k) {
        size_t pc = size_t(E.pivot_col[size_t(k)]);
        DElement acc = t->element(E.rows[size_t(k)][n]);
        for (size_t j = pc + 1; j < n; ++j) {
            if (E.rows[size_t(k)][j].is_zero() || x[j].is_zero()) continue;
            acc = acc - t->element(E.rows[size_t(k)][j]) * x[j];
        }
        x[pc] = acc / t->element(E.rows[size_t(k)][pc]);
    }
    return x;
}

std::vector<DVec> lin_nullspace(const DMat& A, const TowerPtr& t) {
    size_t n = A.empty() ? 0 : A[0].size();
    Echelon E = eliminate(A, nullptr, t);
    std::vector<bool> is_pivot(n, false);
    for (int pc : E.pivot_col) is_pivot[size_t(pc)] = true;
    std::vector<DVec> basis;
    for (size_t f = 0; f < n; ++f) {
        if (is_pivot[f]) continue;
        DVec x(n, t->constant(0));
        x[f] = t->constant(1);
        for (int k = int(E.pivot_col.size()) - 1; k >= 0; --k) {
            size_t pc = size_t(E.pivot_col[size_t(k)]);
            if (pc >= f) continue;
            DElement acc = t->constant(0);
            for (size_t j = pc + 1; j < n; ++j) {
                if (E.rows[size_t(k)][j].is_zero() || x[j].is_zero()) continue;
                acc = acc - t->element(E.rows[size_t(k)][j]) * x[j];
            }
            x[pc] = acc / t->element(E.rows[size_t(k)][pc]);
        }
        basis.push_back(std::move(x));
    }
    return basis;
}

} // namespace fds
