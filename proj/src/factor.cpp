#include "fds/factor.hpp"

#include "fds/fracderiv.hpp"
#include "fds/roots.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>

namespace fds {

namespace {

std::string fresh_name(const char* stem) {
    static std::atomic<uint64_t> counter{0};
    return std::string(stem) + std::to_string(counter.fetch_add(1));
}

// ---- rational linear algebra (A x = rhs, free unknowns set to zero) ----

std::optional<std::vector<Rat>> rat_solve(std::vector<std::vector<Rat>> A, std::vector<Rat> rhs) {
    size_t rows = A.size(), cols = rows ? A[0].size() : 0;
    std::vector<int> pivot_col;
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t p = r;
        while (p < rows && A[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(A[p], A[r]);
        std::swap(rhs[p], rhs[r]);
        Rat inv = Rat(1) / A[r][c];
        for (size_t j = c; j < cols; ++j) A[r][j] *= inv;
        rhs[r] *= inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || A[i][c] == 0) continue;
            Rat f = A[i][c];
            for (size_t j = c; j < cols; ++j) A[i][j] -= f * A[r][j];
            rhs[i] -= f * rhs[r];
        }
        pivot_col.push_back(int(c));
        ++r;
    }
    for (size_t i = r; i < rows; ++i)
        if (rhs[i] != 0) return std::nullopt;
    std::vector<Rat> x(cols, Rat(0));
    for (size_t i = 0; i < pivot_col.size(); ++i) x[size_t(pivot_col[i])] = rhs[i];
    return x;
}

// ---- directions of the symbol ----

struct Direction {
    TowerPtr tower;
    DElement a; // L = d_x + a d_y + b
    unsigned mult = 0;
};

std::vector<Direction> symbol_directions(const LPDO& T) {
    SymbolFactors sf = symbol_linear_factors(symbol_of(T));
    std::vector<Direction> out;
    const TowerPtr& tw = T.tower();
    for (const auto& lf : sf.linear) {
        if (lf.a1.is_zero()) continue; // d_y-only direction: outside the monic-in-d_x search
        out.push_back({tw, lf.a2 / lf.a1, lf.mult});
    }
    for (const auto& [g, m] : sf.residual) {
        if (g.degree() < 2) continue;
        std::vector<DElement> mp;
        DElement li = g.lc().inverse();
        for (int i = 0; i < g.degree(); ++i) mp.push_back(g.coeff(size_t(i)) * li);
        auto ad = tw->adjoin_algebraic(fresh_name("dir"), mp);
        out.push_back({ad.tower, -ad.elem, m});
    }
    return out;
}

// ---- bounded ansatz over transcendental constant parameters ----

struct ParamContext {
    TowerPtr tower;
    std::vector<unsigned> params; // generator (= variable) indices
};

ParamContext adjoin_params(const TowerPtr& t, size_t count) {
    ParamContext pc{t, {}};
    for (size_t k = 0; k < count; ++k) {
        auto ad = pc.tower->adjoin_differential(fresh_name("u"), pc.tower->constant(0),
                                                pc.tower->constant(0));
        pc.params.push_back(unsigned(ad.index));
        pc.tower = ad.tower;
    }
    return pc;
}

// Group the numerator by its non-parameter monomial part; each group must
// vanish, giving one polynomial equation in the parameters.
void split_equations(const MPoly& num, const std::vector<char>& isp, std::vector<MPoly>& eqs) {
    std::map<Mon, MPoly> groups;
    for (const auto& [m, c] : num.terms()) {
        Mon pm, rest;
        pm.assign(m.size(), 0);
        rest.assign(m.size(), 0);
        for (size_t i = 0; i < m.size(); ++i)
            (i < isp.size() && isp[i] ? pm[i] : rest[i]) = m[i];
        while (!pm.empty() && pm.back() == 0) pm.pop_back();
        while (!rest.empty() && rest.back() == 0) rest.pop_back();
        groups[rest].add_term(pm, c);
    }
    for (auto& [k, p] : groups)
        if (!p.is_zero()) eqs.push_back(p);
}

// All rational solutions reachable by univariate branching plus affine
// elimination; incomplete in general (a stuck branch contributes nothing).
void solve_params(const std::vector<MPoly>& eqs, const std::vector<unsigned>& params,
                  std::map<unsigned, Rat>& assign, std::vector<std::map<unsigned, Rat>>& out,
                  int& budget) {
    if (--budget < 0) return;
    unsigned maxv = 0;
    for (unsigned p : params) maxv = std::max(maxv, p);
    std::vector<std::optional<Rat>> subst(maxv + 1);
    for (const auto& [v, val] : assign) subst[v] = val;

    std::vector<MPoly> cur;
    for (const auto& e : eqs) {
        MPoly s = e.eval_partial(subst);
        if (s.is_zero()) continue;
        if (s.is_constant()) return; // contradiction
        cur.push_back(std::move(s));
    }
    if (cur.empty()) {
        std::map<unsigned, Rat> full = assign;
        for (unsigned p : params)
            if (!full.count(p)) full[p] = Rat(0);
        out.push_back(std::move(full));
        return;
    }

    // an equation in a single parameter: branch over its rational roots
    for (const auto& e : cur) {
        std::vector<unsigned> vars;
        for (unsigned p : params)
            if (!assign.count(p) && e.degree(p) > 0) vars.push_back(p);
        if (vars.size() != 1) continue;
        unsigned v = vars[0];
        std::vector<Rat> cs;
        for (const auto& cp : e.coeffs_in(v)) cs.push_back(cp.constant_value());
        for (const Rat& root : rational_roots(cs)) {
            assign[v] = root;
            solve_params(cur, params, assign, out, budget);
            assign.erase(v);
        }
        return;
    }

    // affine subsystem
    std::vector<unsigned> unk;
    for (unsigned p : params)
        if (!assign.count(p)) unk.push_back(p);
    std::vector<std::vector<Rat>> A;
    std::vector<Rat> rhs;
    for (const auto& e : cur) {
        if (e.total_degree() > 1) continue;
        std::vector<Rat> row(unk.size(), Rat(0));
        Rat c0(0);
        for (const auto& [m, c] : e.terms()) {
            unsigned tot = 0, var = 0;
            for (size_t i = 0; i < m.size(); ++i)
                if (m[i]) {
                    tot += m[i];
                    var = unsigned(i);
                }
            if (tot == 0)
                c0 = c;
            else
                row[size_t(std::find(unk.begin(), unk.end(), var) - unk.begin())] = c;
        }
        A.push_back(std::move(row));
        rhs.push_back(-c0);
    }
    if (A.empty()) return; // only nonlinear multi-parameter equations left: stuck
    auto sol = rat_solve(A, rhs);
    if (!sol) return;
    for (size_t i = 0; i < unk.size(); ++i) assign[unk[i]] = (*sol)[i];
    solve_params(cur, params, assign, out, budget);
    for (unsigned v : unk) assign.erase(v);
}

// ---- the per-direction search ----

bool push_candidate(const LPDO& T, const Direction& dir, const DElement& b,
                    std::vector<FactorCandidate>& out) {
    const TowerPtr& tw = dir.tower;
    LPDO L = LPDO::dx(tw) + dir.a * LPDO::dy(tw) + b * LPDO::one(tw);
    auto dr = divide_by_first_order(T.lift(tw), L);
    if (!dr.remainder.is_zero()) return false;
    for (const auto& c : out)
        if (c.L.tower() == tw && c.a == dir.a && c.b == b) return true; // duplicate
    out.push_back({true, dir.a, b, L, dr.quotient});
    return true;
}

void search_direction(const LPDO& T, const Direction& dir, int bound,
                      std::vector<FactorCandidate>& out) {
    int n = T.order();

    if (dir.mult == 1) {
        // b enters the top remainder coefficient linearly with an invertible
        // coefficient; solve exactly (no degree bound applies).
        ParamContext pc = adjoin_params(dir.tower, 1);
        unsigned uv = pc.params[0];
        DElement u = pc.tower->gen_element(uv);
        LPDO L = LPDO::dx(pc.tower) + dir.a.lift(pc.tower) * LPDO::dy(pc.tower) +
                 u * LPDO::one(pc.tower);
        LPDO r = divide_by_first_order(T.lift(pc.tower), L).remainder;
        for (int j = n - 1; j >= 0; --j) {
            DElement e = r.coeff(0, unsigned(j));
            if (e.is_zero()) continue;
            const MPoly& num = e.num();
            unsigned du = num.degree(uv);
            if (e.den().degree(uv) > 0 || du > 1) break; // fall through to the ansatz
            if (du == 0) return;                         // parameter-free obstruction
            auto cs = num.coeffs_in(uv);
            DElement c0 = dir.tower->element(cs[0]);
            DElement c1 = dir.tower->element(cs[1]);
            push_candidate(T, dir, -c0 / c1, out);
            return;
        }
    }

    for (int deg = 0; deg <= bound; ++deg) {
        std::vector<std::pair<unsigned, unsigned>> mons;
        for (unsigned p = 0; int(p) <= deg; ++p)
            for (unsigned q = 0; int(p + q) <= deg; ++q) mons.push_back({p, q});
        ParamContext pc = adjoin_params(dir.tower, mons.size());
        DElement b = pc.tower->constant(0);
        for (size_t k = 0; k < mons.size(); ++k)
            b = b + pc.tower->gen_element(pc.params[k]) * pc.tower->x().pow(int(mons[k].first)) *
                        pc.tower->y().pow(int(mons[k].second));
        LPDO L = LPDO::dx(pc.tower) + dir.a.lift(pc.tower) * LPDO::dy(pc.tower) +
                 b * LPDO::one(pc.tower);
        LPDO r = divide_by_first_order(T.lift(pc.tower), L).remainder;

        std::vector<char> isp(pc.tower->size(), 0);
        for (unsigned p : pc.params) isp[p] = 1;
        std::vector<MPoly> eqs;
        for (const auto& [ij, c] : r.coeffs()) split_equations(c.num(), isp, eqs);

        std::vector<std::map<unsigned, Rat>> sols;
        std::map<unsigned, Rat> assign;
        int budget = 600;
        solve_params(eqs, pc.params, assign, sols, budget);

        bool found = false;
        unsigned maxv = 0;
        for (unsigned p : pc.params) maxv = std::max(maxv, p);
        for (const auto& sol : sols) {
            std::vector<std::optional<Rat>> subst(maxv + 1);
            for (const auto& [v, val] : sol) subst[v] = val;
            DElement bv = dir.tower->element(b.num().eval_partial(subst));
            found |= push_candidate(T, dir, bv, out);
        }
        if (found) return; // minimal-degree solutions; higher degrees rediscover them
    }
}

} // namespace

std::vector<FactorCandidate> right_factor_search(const LPDO& T, int degree_bound) {
    if (T.order() < 1) return {};
    int bound = degree_bound >= 0 ? degree_bound : T.order() + 2;
    std::vector<FactorCandidate> out;
    for (const Direction& dir : symbol_directions(T)) search_direction(T, dir, bound, out);
    return out;
}

std::vector<FactorCandidate> left_factor_search(const LPDO& T, int degree_bound) {
    std::vector<FactorCandidate> out;
    for (const FactorCandidate& rc : right_factor_search(T.adjoint(), degree_bound)) {
        // adjoint(T) = S' L' with L' = d_x + a d_y + b'  gives
        // T = L S with L = d_x + a d_y + (a_y - b'), S = -adjoint(S').
        const TowerPtr& tw = rc.L.tower();
        DElement bl = rc.a.derive(Var::Y) - rc.b;
        LPDO L = LPDO::dx(tw) + rc.a * LPDO::dy(tw) + bl * LPDO::one(tw);
        LPDO S = -(rc.cofactor.adjoint());
        if (T.lift(tw) != L * S)
            throw std::logic_error("left_factor_search: adjoint certificate failed");
        out.push_back({false, rc.a, bl, L, S});
    }
    return out;
}

Disc2Report disc2(const LPDO& T) {
    if (T.order() != 2) throw std::domain_error("disc2: operator must have order 2");
    SymbolFactors sf = symbol_linear_factors(symbol_of(T));
    if (sf.linear.size() != 1 || sf.linear[0].mult != 2 || !sf.residual.empty())
        throw std::domain_error("disc2: symbol is separable");
    if (sf.linear[0].a1.is_zero())
        throw std::domain_error("disc2: double d_y direction; swap the variables first");
    const TowerPtr& tw = T.tower();
    DElement a = sf.linear[0].a2 / sf.linear[0].a1;
    DElement unit = sf.unit * sf.linear[0].a1 * sf.linear[0].a1;
    LPDO Tn = unit.inverse() * T;

    DElement b01 = Tn.coeff(1, 0), b10 = Tn.coeff(0, 1), b00 = Tn.coeff(0, 0);
    DElement disc = a.derive(Var::X) + a * a.derive(Var::Y) + a * b01 - b10;

    // defining identity on a fresh characteristic jet
    auto je = adjoin_characteristic(tw, fresh_name("df"), -a, tw->constant(0), tw->constant(0),
                                    Var::Y, 4);
    DElement f1 = je.f();
    DElement lhs = -(Tn.lift(je.tower).apply(f1)) + b00.lift(je.tower) * f1;
    if (lhs != disc.lift(je.tower) * f1.derive(Var::Y))
        throw std::logic_error("disc2: defining identity failed");

    return {a, b01, b10, b00, disc, unit};
}

Irreducible2 irreducible2(const LPDO& T, int degree_bound) {
    Disc2Report rep = disc2(T);
    if (!rep.disc.is_zero()) return {false, rep, std::nullopt};
    int bound = degree_bound >= 0 ? degree_bound : T.order() + 2;
    std::vector<FactorCandidate> out;
    search_direction(T, {T.tower(), rep.a, 2}, bound, out);
    if (out.empty())
        throw std::runtime_error("irreducible2: Disc = 0 but no factor within the degree bound");
    return {true, rep, std::make_pair(out[0].cofactor, out[0].L)};
}

Factorization factor_up_to_order3(const LPDO& T, int degree_bound) {
    int n = T.order();
    if (n > 3) throw std::invalid_argument("factor_up_to_order3: order exceeds 3");
    if (n <= 1) return {{T}, {false}};

    std::vector<FactorCandidate> cands;
    bool nonsep2 = false;
    if (n == 2) {
        SymbolFactors sf = symbol_linear_factors(symbol_of(T));
        nonsep2 = sf.linear.size() == 1 && sf.linear[0].mult == 2 && sf.residual.empty() &&
                  !sf.linear[0].a1.is_zero();
    }
    if (nonsep2) {
        Irreducible2 ir = irreducible2(T, degree_bound);
        if (!ir.reducible) return {{T}, {true}};
        cands.push_back({true, ir.report.a, DElement(), ir.factors->second, ir.factors->first});
    } else {
        cands = right_factor_search(T, degree_bound);
    }
    if (cands.empty()) return {{T}, {true}};

    Factorization best{{T}, {true}};
    for (const FactorCandidate& c : cands) {
        Factorization sub = factor_up_to_order3(c.cofactor, degree_bound);
        Factorization cur = sub;
        cur.factors.push_back(c.L.lift(Tower::common(c.L.tower(), sub.factors[0].tower())));
        cur.certified_bound.push_back(false);
        if (cur.factors.size() > best.factors.size()) best = cur;
        bool all_first = true;
        for (const LPDO& f : cur.factors) all_first &= f.order() <= 1;
        if (all_first) break;
    }

    TowerPtr tw = T.tower();
    for (const LPDO& f : best.factors) tw = Tower::common(tw, f.tower());
    LPDO prod = LPDO::one(tw);
    for (const LPDO& f : best.factors) prod = prod * f.lift(tw);
    if (prod != T.lift(tw)) throw std::logic_error("factor_up_to_order3: product mismatch");
    return best;
}

TPS tps_apply(const LPDO& T, const TPS& u) {
    TPS r = TPS::constant(Rat(0), u.x0(), u.y0(), u.order());
    for (const auto& [ij, c] : T.coeffs()) {
        TPS d = u;
        for (unsigned i = 0; i < ij.first; ++i) d = d.derive(Var::X);
        for (unsigned j = 0; j < ij.second; ++j) d = d.derive(Var::Y);
        r += expand_series(c, u.x0(), u.y0(), u.order()) * d;
    }
    return r;
}

namespace {

// Solve d_x w = a * d_y w - src * w with w(x0, y) given on the initial line.
TPS propagate_x(const TPS& a, const TPS* src, const TPS& init, int N) {
    TPS w(a.x0(), a.y0(), N);
    for (int q = 0; q <= N; ++q) w.set_coeff(0, q, init.coeff(0, q));
    for (int m = 0; m < N; ++m) {
        TPS g = a * w.derive(Var::Y);
        if (src) g -= (*src) * w;
        for (int q = 0; q + m + 1 <= N; ++q)
            w.set_coeff(m + 1, q, g.coeff(m, q) / Rat(m + 1));
    }
    return w;
}

} // namespace

SeparableData separable_prepare(const LPDO& T, const Rat& x0, const Rat& y0, int N) {
    int n = T.order();
    if (n < 2) throw std::domain_error("separable_prepare: order must be at least 2");
    SymbolFactors sf = symbol_linear_factors(symbol_of(T));
    if (!sf.residual.empty())
        throw std::domain_error("separable_prepare: directions not in the tower");
    unsigned total = 0;
    for (const auto& lf : sf.linear) {
        if (lf.mult != 1 || lf.a1.is_zero())
            throw std::domain_error("separable_prepare: symbol must be separable, monic in d_x");
        total += lf.mult;
    }
    if (int(total) != n) throw std::domain_error("separable_prepare: symbol must split");

    SeparableData data;
    data.x0 = x0;
    data.y0 = y0;
    data.order = N;

    std::vector<TPS> aT;
    try {
        for (const auto& lf : sf.linear) {
            DElement ai = -(lf.a2 / lf.a1); // d_x f_i = a_i d_y f_i
            data.a.push_back(ai);
            aT.push_back(expand_series(ai, x0, y0, N));
        }
        for (size_t i = 0; i < data.a.size(); ++i)
            for (size_t j = i + 1; j < data.a.size(); ++j)
                if (aT[i].coeff(0, 0) == aT[j].coeff(0, 0))
                    throw std::domain_error(
                        "separable_prepare: direction values coincide at the center");

        TPS unitT = expand_series(sf.unit, x0, y0, N);
        TPS init(x0, y0, N); // y - y0
        init.set_coeff(0, 1, Rat(1));

        for (size_t i = 0; i < data.a.size(); ++i) {
            TPS f = propagate_x(aT[i], nullptr, init, N);
            if (!(f.derive(Var::X) - aT[i] * f.derive(Var::Y)).is_zero())
                throw std::logic_error("separable_prepare: characteristic invariant failed");
            data.f.push_back(f);

            // transport equation (2.2): c (d_xh - a_i d_yh) + Tbar_{n-1}(f_i) h = 0
            TPS fx = f.derive(Var::X), fy = f.derive(Var::Y);
            TPS c = unitT.truncate(N - 1);
            for (size_t j = 0; j < data.a.size(); ++j)
                if (j != i) c *= fx - aT[j].truncate(N - 1) * fy;
            TPS tb = TPS::constant(Rat(0), x0, y0, N - 1);
            for (const auto& [ij, cf] : T.coeffs()) {
                if (int(ij.first + ij.second) != n - 1) continue;
                tb += expand_series(cf, x0, y0, N - 1) * fx.pow(ij.first) * fy.pow(ij.second);
            }
            TPS src = tb * c.inverse();
            TPS one = TPS::constant(Rat(1), x0, y0, N);
            TPS h = propagate_x(aT[i], &src, one, N);
            if (!(c * (h.derive(Var::X) - aT[i] * h.derive(Var::Y)) + tb * h).is_zero())
                throw std::logic_error("separable_prepare: transport invariant failed");
            data.h.push_back(h);
        }
    } catch (const std::domain_error&) {
        throw;
    } catch (const std::logic_error&) {
        throw;
    } catch (const std::exception&) {
        throw std::domain_error("separable_prepare: inadmissible center (coefficient pole)");
    }
    return data;
}

Reconstruction separable_reconstruct(const LPDO& T, const TPS& solution,
                                     const SeparableData& data, int N) {
    size_t n = data.a.size();
    if (n == 0 || data.f.size() != n || data.h.size() != n)
        throw std::invalid_argument("separable_reconstruct: unprepared data");
    if (solution.x0() != data.x0 || solution.y0() != data.y0 || solution.order() < N)
        throw std::invalid_argument("separable_reconstruct: center or order mismatch");
    if (!tps_apply(T, solution).is_zero())
        throw std::invalid_argument("separable_reconstruct: solution is not annihilated by T");

    Reconstruction rec;
    TPS partial = TPS::constant(Rat(0), data.x0, data.y0, N);
    TPS sol = solution.truncate(N);
    std::vector<TPS> pw(n, TPS::constant(Rat(1), data.x0, data.y0, N)); // f_i^k / k!

    for (int k = 0; k <= N; ++k) {
        if (k > 0)
            for (size_t i = 0; i < n; ++i) pw[i] = pw[i] * data.f[i] * (Rat(1) / Rat(k));
        std::vector<TPS> W;
        for (size_t i = 0; i < n; ++i) W.push_back(data.h[i] * pw[i]);

        int rows = std::min(k, int(n) - 1) + 1;
        std::vector<std::vector<Rat>> M;
        std::vector<Rat> rhs;
        TPS diff = sol - partial;
        for (int p = 0; p < rows; ++p) {
            std::vector<Rat> row;
            for (size_t i = 0; i < n; ++i) row.push_back(W[i].coeff(p, k - p));
            M.push_back(std::move(row));
            rhs.push_back(diff.coeff(p, k - p));
        }
        auto c = rat_solve(M, rhs);
        if (!c) throw std::runtime_error("separable_reconstruct: van-der-Monde system failed");
        for (size_t i = 0; i < n; ++i) {
            rec.c[{k, int(i)}] = (*c)[i];
            if ((*c)[i] != 0) partial += (*c)[i] * W[i];
        }
    }
    rec.sum = partial;
    rec.residual = sol - partial;
    return rec;
}

} // namespace fds
