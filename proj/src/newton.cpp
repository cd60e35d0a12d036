#include "fds/newton.hpp"

#include "json.hpp"

#include <sstream>

namespace fds {

namespace {

Rat fact(long n) {
    Rat r = 1;
    for (long i = 2; i <= n; ++i) r *= Rat(i);
    return r;
}

Rat binom(int n, int k) {
    Rat r = 1;
    for (int i = 0; i < k; ++i) r *= Rat(n - i, i + 1);
    return r;
}

long lcm_long(long a, long b) {
    Int g = boost::multiprecision::gcd(Int(a), Int(b));
    return long(Int(a) / g * Int(b));
}

std::string rstr(const Rat& r) {
    std::ostringstream o;
    o << r;
    return o.str();
}

// Generator roles within a context: 1 = h family, 2 = formal f_k family.
struct VarClass {
    std::vector<int> role, jl, jr;
};

VarClass classify(const NewtonContext& ctx) {
    size_t ns = ctx.tower->size();
    VarClass vc{std::vector<int>(ns, 0), std::vector<int>(ns, 0), std::vector<int>(ns, 0)};
    for (size_t i = 0; i < ns; ++i) {
        const Gen& g = ctx.tower->gen(i);
        if (g.kind != Gen::FreeJet) continue;
        if (g.family_base == ctx.h_base)
            vc.role[i] = 1;
        else if (g.family_base == ctx.formal_base)
            vc.role[i] = 2;
        else
            continue;
        vc.jl[i] = g.jet_l;
        vc.jr[i] = g.jet_r;
    }
    return vc;
}

void check_den(const DElement& X, const VarClass& vc) {
    for (auto& [m, c] : X.den().terms())
        for (size_t i = 0; i < m.size() && i < vc.role.size(); ++i)
            if (m[i] && vc.role[i])
                throw std::logic_error("edge coefficient denominator involves jet generators");
}

// B_t = h * sum B[a] v1^a v2^{t-a} on a positive-slope edge; anything else
// (derivatives of h, higher jets of f_k) violates the shape of the leading
// polynomial and signals an internal error.
std::vector<DElement> split_edge(const NewtonPolygon& P, const DElement& X, int t,
                                 const VarClass& vc) {
    check_den(X, vc);
    std::vector<MPoly> acc(size_t(t) + 1);
    for (auto& [m, c] : X.num().terms()) {
        int hcount = 0, a = 0, b = 0;
        bool bad = false;
        Mon red = m;
        for (size_t i = 0; i < m.size(); ++i) {
            if (!m[i] || i >= vc.role.size() || !vc.role[i]) continue;
            if (vc.role[i] == 1) {
                if (m[i] != 1 || vc.jl[i] || vc.jr[i]) bad = true;
                hcount += int(m[i]);
            } else {
                if (vc.jl[i] + vc.jr[i] != 1) bad = true;
                if (vc.jl[i])
                    a += int(m[i]);
                else
                    b += int(m[i]);
            }
            red[i] = 0;
        }
        if (bad || hcount != 1 || a + b != t)
            throw std::logic_error("edge coefficient violates the leading-polynomial shape");
        mon_trim(red);
        acc[size_t(a)].add_term(red, c);
    }
    std::vector<DElement> out;
    for (auto& p : acc) out.push_back(P.ctx.tower->element(p, X.den()));
    return out;
}

// The coefficient at a (j, 0) point of a slope-0 edge is a linear operator
// applied to h.
LPDO extract_operator(const NewtonPolygon& P, const DElement& X, const VarClass& vc) {
    check_den(X, vc);
    std::map<std::pair<int, int>, MPoly> acc;
    for (auto& [m, c] : X.num().terms()) {
        int hcount = 0, l = 0, r = 0;
        bool bad = false;
        Mon red = m;
        for (size_t i = 0; i < m.size(); ++i) {
            if (!m[i] || i >= vc.role.size() || !vc.role[i]) continue;
            if (vc.role[i] == 2) bad = true;
            if (m[i] != 1) bad = true;
            hcount += int(m[i]);
            l = vc.jl[i];
            r = vc.jr[i];
            red[i] = 0;
        }
        if (bad || hcount != 1)
            throw std::logic_error("terminal coefficient is not linear in the h jets");
        mon_trim(red);
        acc[{l, r}].add_term(red, c);
    }
    LPDO B(P.ctx.tower);
    for (auto& [lr, p] : acc)
        B.set_coeff(unsigned(lr.first), unsigned(lr.second), P.ctx.tower->element(p, X.den()));
    return B;
}

// Expansion of T(h G) at one level: every term is keyed by the accumulated
// weight j of known-f factors and the count t of formal-f_k factors. Factor
// multisets per slot are enumerated as non-decreasing sequences exactly as in
// the closed Lemma-1 formula.
struct PolyExpand {
    const NewtonContext& ctx;
    size_t nf; // slots 0..nf-1 are known f's, slot nf is the formal f_k
    std::map<std::tuple<int, int, int>, DElement> cache;

    const DElement& dmix(int slot, int l, int r) {
        auto key = std::make_tuple(slot, l, r);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        DElement v;
        if (l == 0 && r == 0)
            v = ctx.f[size_t(slot)];
        else if (r > 0)
            v = dmix(slot, l, r - 1).derive(Var::Y);
        else
            v = dmix(slot, l - 1, r).derive(Var::X);
        return cache.emplace(key, std::move(v)).first->second;
    }

    int jx = 0, jy = 0;
    DElement b;
    std::map<std::pair<Rat, int>, DElement>* out = nullptr;

    void emit(int lx, int ly, const DElement& prod, const Rat& invf, const Rat& j, int t) {
        Rat coeff = fact(jx) * fact(jy) * invf / (fact(lx) * fact(ly));
        DElement v = b * ctx.tower->free_jet(ctx.h_base, lx, ly) * prod * coeff;
        auto key = std::make_pair(j, t);
        auto it = out->find(key);
        if (it == out->end())
            out->emplace(key, std::move(v));
        else
            it->second += v;
    }

    void rec(size_t slot, int minl, int minr, int run, int lx, int ly, const DElement& prod,
             const Rat& invf, const Rat& j, int t) {
        if (slot < nf)
            rec(slot + 1, 0, 1, 0, lx, ly, prod, invf, j, t);
        else
            emit(lx, ly, prod, invf, j, t);
        for (int l = minl; l <= lx; ++l) {
            int rstart = (l == minl) ? minr : (l == 0 ? 1 : 0);
            for (int r = rstart; r <= ly; ++r) {
                int nrun = (l == minl && r == minr) ? run + 1 : 1;
                Rat ninv = invf / (fact(l) * fact(r) * Rat(nrun));
                const DElement& d = slot < nf ? dmix(int(slot), l, r)
                                              : ctx.tower->free_jet(ctx.formal_base, l, r);
                rec(slot, l, r, nrun, lx - l, ly - r, prod * d, ninv,
                    slot < nf ? j + ctx.s[slot] : j, slot < nf ? t : t + 1);
            }
        }
    }
};

} // namespace

NewtonContext newton_context(const TowerPtr& t0, const std::vector<DElement>& f,
                             const std::vector<Rat>& s, const std::string& formal_name,
                             int jet_depth) {
    if (f.empty() || f.size() != s.size() || s[0] != 1)
        throw std::invalid_argument("newton_context: need f_1..f_{k-1} with s_1 = 1");
    NewtonContext ctx;
    auto ah = t0->adjoin_free_jet(formal_name + "_h", jet_depth);
    auto aw = ah.tower->adjoin_free_jet(formal_name, jet_depth);
    ctx.tower = aw.tower;
    ctx.h_base = ah.index;
    ctx.formal_base = aw.index;
    ctx.jet_depth = jet_depth;
    for (auto& fi : f) ctx.f.push_back(fi.lift(ctx.tower));
    ctx.s = s;
    return ctx;
}

NewtonPolygon build_polygon(const LPDO& T, const NewtonContext& ctx, int level) {
    NewtonPolygon P;
    P.level = level;
    P.ctx = ctx;
    P.order = std::max(T.order(), 0);
    if (P.order > ctx.jet_depth)
        throw std::invalid_argument("build_polygon: jet depth below the operator order");
    DElement f1x = ctx.f[0].derive(Var::X), f1y = ctx.f[0].derive(Var::Y);
    if (!symbol_of(T).eval(f1x, f1y).is_zero())
        throw std::domain_error("build_polygon: symbol does not vanish on grad f_1");

    LPDO Tl = T.lift(ctx.tower);
    PolyExpand px{ctx, ctx.f.size(), {}};
    px.out = &P.points;
    for (auto& [ij, b] : Tl.coeffs()) {
        px.jx = int(ij.first);
        px.jy = int(ij.second);
        px.b = b;
        px.rec(0, 0, 1, 0, px.jx, px.jy, ctx.tower->constant(1), Rat(1), Rat(0), 0);
    }
    for (auto it = P.points.begin(); it != P.points.end();)
        it = it->second.is_zero() ? P.points.erase(it) : std::next(it);

    // Upper concave majorant of max-j per t gives the support boundary for
    // directions (1, s), s > 0; its edges from the top vertex down have
    // strictly decreasing slopes.
    std::map<int, Rat> jmax;
    for (auto& [k, v] : P.points) {
        auto it = jmax.find(k.second);
        if (it == jmax.end() || k.first > it->second) jmax[k.second] = k.first;
    }
    std::vector<std::pair<int, Rat>> chain; // (t, j), t ascending
    for (auto& [t, j] : jmax) {
        while (chain.size() >= 2) {
            auto& a = chain[chain.size() - 2];
            auto& b2 = chain[chain.size() - 1];
            // keep b2 only if it lies strictly above chord a--(t, j)
            if ((b2.second - a.second) * Rat(t - a.first) >
                (j - a.second) * Rat(b2.first - a.first))
                break;
            chain.pop_back();
        }
        chain.push_back({t, j});
    }
    for (auto it = chain.rbegin(); it != chain.rend(); ++it)
        P.hull.push_back({it->second, it->first});
    return P;
}

std::vector<LeadingEdge> leading_edges(const NewtonPolygon& P, const Rat& max_slope) {
    std::vector<LeadingEdge> out;
    for (size_t i = 0; i + 1 < P.hull.size(); ++i) {
        LeadingEdge e;
        e.j3 = P.hull[i].first;
        e.t3 = P.hull[i].second;
        e.j4 = P.hull[i + 1].first;
        e.t4 = P.hull[i + 1].second;
        e.slope = (e.j4 - e.j3) / Rat(e.t3 - e.t4);
        if (e.slope >= 0 && e.slope < max_slope) out.push_back(e);
    }
    return out;
}

LeadingPolynomial leading_polynomial(const NewtonPolygon& P, const LeadingEdge& e) {
    LeadingPolynomial Q;
    Q.edge = e;
    VarClass vc = classify(P.ctx);
    if (e.slope == 0) {
        auto it = P.points.find({e.j4, 0});
        Q.Bbar = it == P.points.end() ? LPDO(P.ctx.tower) : extract_operator(P, it->second, vc);
        return Q;
    }
    for (int t = e.t4; t <= e.t3; ++t) {
        Rat j = e.j3 + e.slope * Rat(e.t3 - t);
        auto it = P.points.find({j, t});
        if (it == P.points.end()) continue;
        Q.B[t] = split_edge(P, it->second, t, vc);
    }
    if (!Q.B.count(e.t3)) throw std::logic_error("leading_polynomial: pivot coefficient missing");
    return Q;
}

TaylorShift taylor_shift(const LeadingPolynomial& Q, const DElement& fk,
                         const NewtonPolygon& Pnext) {
    const NewtonContext& ctx = Pnext.ctx;
    Rat sk = ctx.s.back();
    if (sk != Q.edge.slope)
        throw std::invalid_argument("taylor_shift: last exponent of Pnext must equal the slope");
    TowerPtr t = ctx.tower;
    DElement v1 = fk.derive(Var::X).lift(t), v2 = fk.derive(Var::Y).lift(t);
    int t3 = Q.edge.t3;

    TaylorShift r;
    std::map<int, std::vector<DElement>> bh;
    for (int th = 0; th <= t3; ++th) {
        std::vector<DElement> vec(size_t(th) + 1, t->constant(0));
        bool nz = false;
        for (auto& [tt, coeffs] : Q.B) {
            for (int l = 0; l <= tt; ++l) {
                int rr = tt - l;
                if (coeffs[size_t(l)].is_zero()) continue;
                DElement c = coeffs[size_t(l)].lift(t);
                for (int i1 = std::max(0, th - rr); i1 <= std::min(l, th); ++i1) {
                    int i2 = th - i1;
                    vec[size_t(i1)] += binom(l, i1) * binom(rr, i2) * c * v1.pow(l - i1) *
                                       v2.pow(rr - i2);
                }
            }
        }
        for (auto& v : vec) nz = nz || !v.is_zero();
        if (th == 0) {
            if (nz) throw std::invalid_argument("taylor_shift: f_k does not solve Q = 0");
            continue;
        }
        if (nz) {
            if (r.t0 == 0) r.t0 = th;
            bh[th] = vec;
        }
    }
    if (r.t0 == 0) throw std::logic_error("taylor_shift: all Bhat_t vanish");
    r.Bhat = bh;

    // Re-expansion check: P_{k+1} lies weakly under the leading line, and its
    // coefficients on the line reproduce Eq. (3).
    Rat axis = Q.edge.j3 + sk * Rat(t3);
    for (auto& [k, v] : Pnext.points)
        if (k.first + sk * Rat(k.second) > axis)
            throw std::logic_error("taylor_shift: re-expansion exceeds the leading line");
    VarClass vc = classify(ctx);
    for (int th = 0; th <= t3; ++th) {
        Rat j = axis - sk * Rat(th);
        auto it = Pnext.points.find({j, th});
        std::vector<DElement> got(size_t(th) + 1, t->constant(0));
        if (it != Pnext.points.end()) got = split_edge(Pnext, it->second, th, vc);
        auto bi = bh.find(th);
        for (int l = 0; l <= th; ++l) {
            DElement want = bi == bh.end() ? t->constant(0) : bi->second[size_t(l)];
            if (got[size_t(l)] != want)
                throw std::logic_error("taylor_shift: Eq. (3) disagrees with the re-expansion");
        }
    }
    return r;
}

namespace {

struct Solved {
    DElement fk;
    std::string ext;
};

std::optional<Int> iroot(const Int& n, int p) { // exact p-th root of n >= 0
    Int lo = 0, hi = 1;
    while (boost::multiprecision::pow(hi, unsigned(p)) < n) hi <<= 1;
    while (lo <= hi) {
        Int mid = (lo + hi) / 2;
        Int mp = boost::multiprecision::pow(mid, unsigned(p));
        if (mp == n) return mid;
        if (mp < n)
            lo = mid + 1;
        else
            hi = mid - 1;
    }
    return std::nullopt;
}

std::optional<DElement> rat_root(const TowerPtr& t, const DElement& D, int p) {
    if (!D.is_rational()) return std::nullopt;
    Rat v = D.rational_value();
    if (v == 0) return t->constant(0);
    bool neg = v < 0;
    if (neg && p % 2 == 0) return std::nullopt;
    Rat a = neg ? -v : v;
    auto rn = iroot(rat_num(a), p);
    auto rd = iroot(rat_den(a), p);
    if (!rn || !rd) return std::nullopt;
    Rat r(*rn, *rd);
    return t->constant(neg ? -r : r);
}

// Built-in solvers for the leading equation Q(f_k) = 0: transport edges
// (t3 = 1) through a characteristic jet, and two-point edges whose pivot is a
// perfect power u (alpha v1 + beta v2)^{t3} through a root adjunction plus a
// characteristic jet. Everything else falls through to the scripted hook.
Solved solve_leading(const LeadingPolynomial& Q, int level, const SeriesOptions& opt,
                     int jdepth) {
    const LeadingEdge& e = Q.edge;
    TowerPtr t = Q.B.at(e.t3)[0].tower();
    std::string name = "f" + std::to_string(level);
    DElement b0 = Q.B.count(0) ? Q.B.at(0)[0] : t->constant(0);
    if (e.t3 == 1) {
        DElement c1 = Q.B.at(1)[1], c2 = Q.B.at(1)[0];
        if (!c1.is_zero()) {
            auto je = adjoin_characteristic(t, name, -(c2 / c1), t->constant(0), -(b0 / c1),
                                            Var::Y, jdepth);
            return {je.f(), "char_jet"};
        }
        if (!c2.is_zero()) {
            auto je = adjoin_characteristic(t, name, t->constant(0), t->constant(0), -(b0 / c2),
                                            Var::X, jdepth);
            return {je.f(), "char_jet"};
        }
        throw std::domain_error("solve_leading: degenerate transport edge");
    }
    if (e.t4 == 0) {
        bool two_point = true;
        for (auto& [tt, v] : Q.B)
            if (tt != 0 && tt != e.t3) two_point = false;
        if (two_point) {
            const auto& vec = Q.B.at(e.t3);
            int p = e.t3;
            DElement u, beta;
            bool have = false, alpha1 = false;
            if (!vec[size_t(p)].is_zero()) {
                u = vec[size_t(p)];
                beta = vec[size_t(p) - 1] / (Rat(p) * u);
                have = true;
                alpha1 = true;
                for (int i = 0; i <= p && have; ++i)
                    if (vec[size_t(i)] != u * binom(p, i) * beta.pow(p - i)) have = false;
            } else {
                have = !vec[0].is_zero();
                for (size_t i = 1; i < vec.size() && have; ++i)
                    if (!vec[i].is_zero()) have = false;
                u = vec[0];
            }
            if (have) {
                DElement D = -(b0 / u);
                DElement z;
                std::string ext = "char_jet";
                if (!D.is_zero()) {
                    std::optional<DElement> sq = rat_root(t, D, p);
                    if (!sq && p == 2) sq = t->try_sqrt(D);
                    if (sq) {
                        z = *sq;
                    } else {
                        std::vector<DElement> mc(size_t(p), t->constant(0));
                        mc[0] = -D;
                        auto az = t->adjoin_algebraic("z" + std::to_string(level), mc);
                        t = az.tower;
                        z = az.elem;
                        ext = "root" + std::to_string(p);
                    }
                } else {
                    z = t->constant(0);
                }
                if (alpha1) {
                    auto je = adjoin_characteristic(t, name, -beta.lift(t), t->constant(0), z,
                                                    Var::Y, jdepth);
                    return {je.f(), ext};
                }
                auto je = adjoin_characteristic(t, name, t->constant(0), t->constant(0), z,
                                                Var::X, jdepth);
                return {je.f(), ext};
            }
        }
    }
    if (opt.solve_fk) return {opt.solve_fk(t, Q), "scripted"};
    throw std::domain_error("solve_leading: leading equation outside the supported patterns");
}

} // namespace

SeriesResult construct_series(const LPDO& T, const LinearFactor& factor,
                              const SeriesOptions& opt) {
    int n = T.order();
    if (n < 1) throw std::invalid_argument("construct_series: operator order must be positive");
    int cdepth = n * (opt.tail_N + 3) + 6; // characteristic-jet depth, with tail headroom
    TowerPtr t = T.tower();

    DElement f1;
    if (opt.f1) {
        f1 = *opt.f1;
        TowerPtr ft = Tower::common(f1.tower(), t);
        t = ft;
        f1 = f1.lift(t);
        DElement chk = factor.a1.lift(t) * f1.derive(Var::X) + factor.a2.lift(t) * f1.derive(Var::Y);
        if (!chk.is_zero())
            throw std::invalid_argument("construct_series: f1 is not characteristic for the factor");
        if (f1.derive(Var::X).is_zero() && f1.derive(Var::Y).is_zero())
            throw std::invalid_argument("construct_series: grad f1 vanishes");
    } else if (factor.a1.is_rational() && factor.a2.is_rational() &&
               !(factor.a1.is_zero() && factor.a2.is_zero())) {
        // Constant direction: a concrete characteristic a2 x - a1 y exists.
        f1 = factor.a2.rational_value() * t->x() - factor.a1.rational_value() * t->y();
    } else if (!factor.a1.is_zero()) {
        auto je = adjoin_characteristic(t, "f1", -(factor.a2 / factor.a1), t->constant(0),
                                        t->constant(0), Var::Y, cdepth);
        t = je.tower;
        f1 = je.f();
    } else if (!factor.a2.is_zero()) {
        auto je = adjoin_characteristic(t, "f1", t->constant(0), t->constant(0), t->constant(0),
                                        Var::X, cdepth);
        t = je.tower;
        f1 = je.f();
    } else {
        throw std::invalid_argument("construct_series: zero factor");
    }

    std::vector<DElement> fs{f1};
    std::vector<Rat> s{Rat(1)};
    BranchTrace trace;
    long q = 1;
    Rat prev = 1;
    std::optional<Rat> prev_axis;
    std::optional<std::pair<int, int>> prev_mult; // (t0, t3) of the previous level

    int level = 2;
    NewtonContext ctx = newton_context(t, fs, s, "w2", n);
    NewtonPolygon P = build_polygon(T, ctx, 2);
    for (;;) {
        auto edges = leading_edges(P, prev);
        std::vector<LeadingEdge> pos;
        for (auto& e : edges)
            if (e.slope > 0) pos.push_back(e);
        if (pos.empty()) break;
        size_t li = size_t(level - 2);
        size_t pick = li < opt.edge_choice.size() ? opt.edge_choice[li] : pos.size() - 1;
        if (pick >= pos.size())
            throw std::invalid_argument("construct_series: edge_choice out of range");
        const LeadingEdge e = pos[pick];

        LeadingPolynomial Q = leading_polynomial(P, e);
        Solved sol = solve_leading(Q, level, opt, cdepth);
        long q2 = lcm_long(q, long(rat_den(e.slope)));
        if (prev_mult && prev_mult->first == prev_mult->second && q2 != q)
            throw std::logic_error("construct_series: q grew although the multiplicity held");

        fs.push_back(sol.fk);
        s.push_back(e.slope);
        ++level;
        ctx = newton_context(sol.fk.tower(), fs, s, "w" + std::to_string(level), n);
        NewtonPolygon P2 = build_polygon(T, ctx, level);
        TaylorShift ts = taylor_shift(Q, sol.fk, P2);

        Rat bound = Rat(e.t4) + Rat(e.t3 - e.t4) * Rat(q) / Rat(q2);
        if (Rat(ts.t0) > bound)
            throw std::logic_error("construct_series: multiplicity bound violated");
        Rat axis = e.j3 + e.slope * Rat(e.t3);
        if (prev_axis && !(axis < *prev_axis))
            throw std::logic_error("construct_series: leading-line intersections must decrease");

        trace.levels.push_back({level - 1, e, q2, ts.t0, axis, sol.ext});
        prev_axis = axis;
        prev_mult = {{ts.t0, e.t3}};
        prev = e.slope;
        q = q2;
        P = std::move(P2);
    }

    // Terminal edge of slope <= 0: pivot (j5, t5), operator Bbar at (j5, 0).
    Rat j5(0);
    bool found = false;
    for (auto& [k, v] : P.points)
        if (k.second == 0 && (!found || k.first > j5)) {
            j5 = k.first;
            found = true;
        }
    int t5 = 0;
    for (auto& [k, v] : P.points)
        if (k.first == j5 && k.second > t5) t5 = k.second;
    trace.final_pivot_j = j5;
    trace.final_pivot_t = t5;
    trace.q_final = q;

    TowerPtr tb = P.ctx.tower;
    VarClass vc = classify(P.ctx);
    LPDO Bbar(tb);
    if (found) Bbar = extract_operator(P, P.points.at({j5, 0}), vc);

    DElement h0;
    int bord = Bbar.order();
    if (bord == 1 && !opt.solve_h) {
        DElement b10 = Bbar.coeff(1, 0), b01 = Bbar.coeff(0, 1), b00 = Bbar.coeff(0, 0);
        int hdepth = n * (opt.tail_N + 1) + 4;
        if (!b10.is_zero()) {
            auto je = adjoin_characteristic(tb, "h0", -(b01 / b10), -(b00 / b10),
                                            tb->constant(0), Var::Y, hdepth);
            tb = je.tower;
            h0 = je.f();
        } else {
            auto je = adjoin_characteristic(tb, "h0", tb->constant(0), -(b00 / b01),
                                            tb->constant(0), Var::X, hdepth);
            tb = je.tower;
            h0 = je.f();
        }
    } else if (opt.solve_h) {
        h0 = opt.solve_h(tb, Bbar);
        tb = Tower::common(h0.tower(), tb);
        h0 = h0.lift(tb);
    } else {
        std::ostringstream o;
        o << "construct_series: final equation of order " << bord << " needs solve_h";
        throw std::domain_error(o.str());
    }
    if (h0.is_zero()) throw std::invalid_argument("construct_series: h0 must be nonzero");
    if (!Bbar.lift(tb).apply(h0).is_zero())
        throw std::invalid_argument("construct_series: h0 does not satisfy the final equation");

    std::vector<DElement> gfs;
    for (auto& fi : fs) gfs.push_back(fi.lift(tb));
    std::vector<Rat> fe(s.begin() + 1, s.end());
    auto G = GSymbol::make(tb, gfs, fe);

    SeriesResult R{FracSeries{G, Rat(0), {h0}, 0}, trace, Bbar.lift(tb), tb};
    if (opt.tail_N > 0) tail_coefficients(T, R, opt.tail_N);
    return R;
}

void tail_coefficients(const LPDO& T, SeriesResult& R, int N) {
    FracSeries& S = R.series;
    long q = S.G->q;
    int n = std::max(T.order(), 1);
    TowerPtr t = R.tower;

    FracElement E(S.G);
    for (size_t i = 0; i < S.h.size(); ++i)
        if (!S.h[i].is_zero())
            E = E + expand_apply(T, S.h[i], S.s0 - Rat(long(i)) / Rat(q), S.G);

    for (size_t i = S.h.size(); i <= size_t(N); ++i) {
        Rat target = S.s0 + R.trace.final_pivot_j - Rat(long(i)) / Rat(q);
        DElement fbar = -E.coeff(target);
        DElement hi;
        if (fbar.is_zero()) {
            hi = t->constant(0);
        } else if (R.Bbar.order() == 1) {
            DElement b10 = R.Bbar.coeff(1, 0).lift(t), b01 = R.Bbar.coeff(0, 1).lift(t),
                     b00 = R.Bbar.coeff(0, 0).lift(t);
            fbar = fbar.lift(t);
            // h_i jets are derived n times per expansion; each later tail
            // adjunction pulls them (n-1) deeper through its relation.
            int hdepth = n * (N - int(i) + 1) + 2;
            std::string name = "h" + std::to_string(i);
            if (!b10.is_zero()) {
                auto je = adjoin_characteristic(t, name, -(b01 / b10), -(b00 / b10), fbar / b10,
                                                Var::Y, hdepth);
                t = je.tower;
                hi = je.f();
            } else {
                auto je = adjoin_characteristic(t, name, t->constant(0), -(b00 / b01),
                                                fbar / b01, Var::X, hdepth);
                t = je.tower;
                hi = je.f();
            }
        } else {
            throw std::domain_error(
                "tail_coefficients: inhomogeneous solve beyond order 1 unsupported");
        }
        if (!(R.Bbar.lift(t).apply(hi) - fbar.lift(t)).is_zero())
            throw std::logic_error("tail_coefficients: solve verification failed");
        S.h.push_back(hi);
        if (!hi.is_zero())
            E = E + expand_apply(T, hi, S.s0 - Rat(long(i)) / Rat(q), S.G);
    }
    R.tower = t;
}

std::string polygon_json(const NewtonPolygon& P) {
    nlohmann::json j;
    j["level"] = P.level;
    j["order"] = P.order;
    auto pts = nlohmann::json::array();
    for (auto& [k, v] : P.points)
        pts.push_back({{"j", rstr(k.first)}, {"t", k.second}, {"coeff", v.str()}});
    j["points"] = pts;
    auto hl = nlohmann::json::array();
    for (auto& [jj, tt] : P.hull) hl.push_back({{"j", rstr(jj)}, {"t", tt}});
    j["hull"] = hl;
    return j.dump();
}

std::string trace_json(const BranchTrace& tr) {
    nlohmann::json j;
    auto lv = nlohmann::json::array();
    for (auto& r : tr.levels)
        lv.push_back({{"level", r.level},
                      {"edge",
                       {{"j3", rstr(r.edge.j3)},
                        {"t3", r.edge.t3},
                        {"j4", rstr(r.edge.j4)},
                        {"t4", r.edge.t4},
                        {"slope", rstr(r.edge.slope)}}},
                      {"q", r.q},
                      {"t0", r.t0},
                      {"axis", rstr(r.axis)},
                      {"extension", r.extension}});
    j["levels"] = lv;
    j["q_final"] = tr.q_final;
    j["final_pivot"] = {{"j", rstr(tr.final_pivot_j)}, {"t", tr.final_pivot_t}};
    return j.dump();
}

} // namespace fds
