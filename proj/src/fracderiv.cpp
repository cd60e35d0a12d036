#include "fds/fracderiv.hpp"

#include <sstream>

namespace fds {

namespace {

Rat fact(long n) {
    Rat r = 1;
    for (long i = 2; i <= n; ++i) r *= Rat(i);
    return r;
}

long lcm_long(long a, long b) {
    Int g = boost::multiprecision::gcd(Int(a), Int(b));
    return long(Int(a) / g * Int(b));
}

} // namespace

GSymbolPtr GSymbol::make(const TowerPtr& t, std::vector<DElement> fs, std::vector<Rat> frac_exps) {
    if (fs.empty()) throw std::invalid_argument("GSymbol: needs at least f_1");
    if (frac_exps.size() + 1 != fs.size())
        throw std::invalid_argument("GSymbol: need one exponent per f beyond f_1");
    auto g = std::make_shared<GSymbol>();
    g->t = t;
    for (auto& f : fs) g->f.push_back(f.lift(t));
    g->s.push_back(Rat(1));
    Rat prev = 1;
    long q = 1;
    for (auto& e : frac_exps) {
        if (!(e > 0 && e < prev))
            throw std::invalid_argument("GSymbol: exponents must satisfy 1 > s_2 > ... > 0");
        prev = e;
        g->s.push_back(e);
        q = lcm_long(q, long(rat_den(e)));
    }
    g->q = q;
    return g;
}

FracElement FracElement::term(const GSymbolPtr& g, const Rat& s, const DElement& h) {
    FracElement r(g);
    r.set_coeff(s, h);
    return r;
}

DElement FracElement::coeff(const Rat& s) const {
    auto it = c_.find(s);
    return it == c_.end() ? g_->t->constant(0) : it->second;
}

void FracElement::set_coeff(const Rat& s, const DElement& h) {
    if (h.is_zero())
        c_.erase(s);
    else
        c_[s] = h;
}

FracElement FracElement::operator-() const {
    FracElement r(g_);
    for (auto& [s, h] : c_) r.c_.emplace(s, -h);
    return r;
}

FracElement operator+(const FracElement& a, const FracElement& b) {
    if (a.g_ != b.g_) throw std::invalid_argument("FracElement: mixed G-symbols");
    FracElement r = a;
    for (auto& [s, h] : b.c_) r.set_coeff(s, r.coeff(s) + h);
    return r;
}

FracElement operator-(const FracElement& a, const FracElement& b) { return a + (-b); }

FracElement operator*(const DElement& c, const FracElement& a) {
    FracElement r(a.g_);
    for (auto& [s, h] : a.c_) r.set_coeff(s, c * h);
    return r;
}

FracElement FracElement::derive(Var v) const {
    FracElement r(g_);
    for (auto& [s, h] : c_) {
        r.set_coeff(s, r.coeff(s) + h.derive(v));
        for (size_t i = 0; i < g_->f.size(); ++i)
            r.set_coeff(s + g_->s[i], r.coeff(s + g_->s[i]) + h * g_->f[i].derive(v));
    }
    return r;
}

std::string FracElement::str() const {
    if (c_.empty()) return "0";
    std::ostringstream o;
    bool first = true;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        if (!first) o << " + ";
        first = false;
        o << "(" << it->second.str() << ")*G^(" << it->first << ")";
    }
    return o.str();
}

FracElement expand_apply(const LPDO& T, const DElement& h, const Rat& s0, const GSymbolPtr& G) {
    FracElement base = FracElement::term(G, s0, h);
    FracElement r(G);
    for (auto& [ij, b] : T.coeffs()) {
        FracElement e = base;
        for (unsigned k = 0; k < ij.second; ++k) e = e.derive(Var::Y);
        for (unsigned k = 0; k < ij.first; ++k) e = e.derive(Var::X);
        r = r + b * e;
    }
    return r;
}

namespace {

// Enumeration state for one monomial b d_x^jx d_y^jy of Lemma 1: factors
// (l, r) per f_kappa are generated as non-decreasing sequences so every
// unordered partition is visited exactly once; invf accumulates
// 1/(prod l! r! w!) where the repetition counts w build up run by run.
struct ClosedExpand {
    const GSymbol& G;
    DElement h;
    std::map<std::tuple<int, int, int>, DElement> cache; // key (-1 for h)

    const DElement& dmix(int kappa, int l, int r) {
        auto key = std::make_tuple(kappa, l, r);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        DElement v;
        if (l == 0 && r == 0)
            v = kappa < 0 ? h : G.f[size_t(kappa)];
        else if (r > 0)
            v = dmix(kappa, l, r - 1).derive(Var::Y);
        else
            v = dmix(kappa, l - 1, r).derive(Var::X);
        return cache.emplace(key, std::move(v)).first->second;
    }

    int jx = 0, jy = 0;
    DElement b;
    Rat s0;
    FracElement* out = nullptr;

    void emit(int lx, int ly, const DElement& prod, const Rat& invf, const Rat& expo) {
        Rat coeff = fact(jx) * fact(jy) * invf / (fact(lx) * fact(ly));
        DElement v = b * dmix(-1, lx, ly) * prod * coeff;
        out->set_coeff(expo, out->coeff(expo) + v);
    }

    void rec(size_t kappa, int minl, int minr, int run, int lx, int ly, const DElement& prod,
             const Rat& invf, const Rat& expo) {
        if (kappa + 1 < G.f.size())
            rec(kappa + 1, 0, 1, 0, lx, ly, prod, invf, expo);
        else
            emit(lx, ly, prod, invf, expo);
        for (int l = minl; l <= lx; ++l) {
            int rstart = (l == minl) ? minr : (l == 0 ? 1 : 0);
            for (int r = rstart; r <= ly; ++r) {
                int nrun = (l == minl && r == minr) ? run + 1 : 1;
                Rat ninv = invf / (fact(l) * fact(r) * Rat(nrun));
                rec(kappa, l, r, nrun, lx - l, ly - r, prod * dmix(int(kappa), l, r), ninv,
                    expo + G.s[kappa]);
            }
        }
    }
};

} // namespace

FracElement expand_apply_closed(const LPDO& T, const DElement& h, const Rat& s0,
                                const GSymbolPtr& G) {
    FracElement r(G);
    ClosedExpand cx{*G, h, {}};
    cx.s0 = s0;
    cx.out = &r;
    for (auto& [ij, b] : T.coeffs()) {
        cx.jx = int(ij.first);
        cx.jy = int(ij.second);
        cx.b = b;
        cx.rec(0, 0, 1, 0, cx.jx, cx.jy, G->t->constant(1), Rat(1), s0);
    }
    return r;
}

std::map<Rat, TPS> specialize(const GSymbolPtr& G, const std::map<Rat, Rat>& consts, int N,
                              const std::vector<Rat>& exponents) {
    if (G->k0() > 2)
        throw std::invalid_argument("specialize: series coordinates support k0 <= 2");
    std::map<Rat, TPS> out;
    for (auto& s : exponents) {
        TPS g(0, 0, N);
        for (int j1 = 0; j1 <= N; ++j1) {
            int j2max = G->k0() >= 2 ? N - j1 : 0;
            for (int j2 = 0; j2 <= j2max; ++j2) {
                Rat idx = -s - Rat(j1);
                if (G->k0() >= 2) idx -= Rat(j2) * G->s[1];
                auto it = consts.find(idx);
                if (it == consts.end()) {
                    std::ostringstream o;
                    o << "specialize: missing constant c_(" << idx << ")";
                    throw std::invalid_argument(o.str());
                }
                if (it->second != 0)
                    g.set_coeff(j1, j2, it->second / (fact(j1) * fact(j2)));
            }
        }
        out.emplace(s, std::move(g));
    }
    return out;
}

JetExtension adjoin_characteristic(const TowerPtr& t, const std::string& name,
                                   const DElement& c1, const DElement& c2, const DElement& c3,
                                   Var orient, int depth) {
    auto adj = t->adjoin_char_jet(name, c1, c2, c3, orient, depth);
    JetExtension je{adj.tower, adj.index, orient, depth};
    for (int k = 0; k <= std::min(depth - 2, 2); ++k) {
        DElement w = je.jet(k);
        if (w.derive(Var::X).derive(Var::Y) != w.derive(Var::Y).derive(Var::X))
            throw std::logic_error("adjoin_characteristic: derivations do not commute");
    }
    return je;
}

VerifyResult verify_series(const LPDO& T, const FracSeries& S, int depth) {
    if (S.h.empty() || S.h[0].is_zero())
        throw std::invalid_argument("verify_series: h_0 must be nonzero");
    if (rat_den(S.s0 * Rat(S.G->q)) != 1)
        throw std::invalid_argument("verify_series: q*s0 not integral");
    FracElement E(S.G);
    for (size_t i = 0; i < S.h.size(); ++i)
        E = E + expand_apply(T, S.h[i], S.s0 - Rat(long(i)) / Rat(S.G->q), S.G);
    int n = std::max(T.order(), 0);
    VerifyResult r;
    for (int j = 0; j < depth; ++j) {
        Rat e = S.s0 + Rat(n) - Rat(j) / Rat(S.G->q);
        if (!E.coeff(e).is_zero()) {
            r.first_fail = e;
            break;
        }
        ++r.verified_depth;
    }
    return r;
}

} // namespace fds
