#include "fds/mpoly.hpp"

#include <sstream>

namespace fds {

Rat MPoly::evaluate(const std::vector<Rat>& vals) const {
    Rat r = 0;
    for (auto& [m, c] : terms_) {
        Rat t = c;
        for (size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0) continue;
            if (i >= vals.size()) throw std::invalid_argument("MPoly::evaluate: missing value");
            Rat p = 1;
            for (unsigned k = 0; k < m[i]; ++k) p *= vals[i];
            t *= p;
        }
        r += t;
    }
    return r;
}

MPoly MPoly::eval_partial(const std::vector<std::optional<Rat>>& subst) const {
    MPoly r;
    for (auto& [m, c] : terms_) {
        Rat coef = c;
        Mon n = m;
        for (size_t i = 0; i < n.size(); ++i) {
            if (n[i] == 0 || i >= subst.size() || !subst[i]) continue;
            Rat p = 1;
            for (unsigned k = 0; k < n[i]; ++k) p *= *subst[i];
            coef *= p;
            n[i] = 0;
        }
        mon_trim(n);
        r.add_term(n, coef);
    }
    return r;
}

std::vector<MPoly> MPoly::coeffs_in(unsigned var) const {
    std::vector<MPoly> cs(degree(var) + 1);
    for (auto& [m, c] : terms_) {
        unsigned e = var < m.size() ? m[var] : 0;
        Mon n = m;
        if (var < n.size()) n[var] = 0;
        mon_trim(n);
        cs[e].add_term(n, c);
    }
    while (cs.size() > 1 && cs.back().is_zero()) cs.pop_back();
    return cs;
}

MPoly MPoly::from_coeffs(unsigned var, const std::vector<MPoly>& cs) {
    MPoly r;
    for (size_t e = 0; e < cs.size(); ++e) {
        if (cs[e].is_zero()) continue;
        r += cs[e] * MPoly::var(var, unsigned(e));
    }
    return r;
}

Rat MPoly::content_rat() const {
    if (is_zero()) return Rat(1);
    Int num_gcd = 0, den_lcm = 1;
    for (auto& [m, c] : terms_) {
        num_gcd = boost::multiprecision::gcd(num_gcd, rat_num(c));
        Int d = rat_den(c);
        den_lcm = den_lcm / boost::multiprecision::gcd(den_lcm, d) * d;
    }
    Rat cont(num_gcd, den_lcm);
    if (leading_coeff() < 0) cont = -cont;
    return cont;
}

MPoly MPoly::ipp() const {
    if (is_zero()) return *this;
    Rat c = content_rat();
    MPoly r = *this;
    for (auto& [m, v] : r.terms_) v /= c;
    return r;
}

std::optional<MPoly> MPoly::try_divide(const MPoly& d) const {
    if (d.is_zero()) throw std::invalid_argument("MPoly division by zero");
    // Integer fast path: exact division in Z avoids the per-operation gcd
    // normalization of rational arithmetic, which dominates on the large
    // integers the heuristic gcd produces.
    bool ints = true;
    for (auto& [m, c] : terms_)
        if (rat_den(c) != 1) { ints = false; break; }
    if (ints)
        for (auto& [m, c] : d.terms_)
            if (rat_den(c) != 1) { ints = false; break; }
    if (ints) {
        std::map<Mon, Int, MonLess> rem;
        for (auto& [m, c] : terms_) rem.emplace(m, rat_num(c));
        const Mon& dm = d.leading_mon();
        Int dc = rat_num(d.leading_coeff());
        MPoly q;
        bool exact = true;
        while (!rem.empty()) {
            auto rit = std::prev(rem.end());
            if (!mon_divides(dm, rit->first)) return std::nullopt;
            Int qc, qr;
            boost::multiprecision::divide_qr(rit->second, dc, qc, qr);
            if (qr != 0) { exact = false; break; } // quotient may still exist over Q
            Mon qm = mon_div(rit->first, dm);
            q.add_term(qm, Rat(qc));
            for (auto& [m2, c2] : d.terms_) {
                auto [it, fresh] = rem.emplace(mon_mul(qm, m2), Int(0));
                it->second -= qc * rat_num(c2);
                if (it->second == 0) rem.erase(it);
            }
        }
        if (exact) return q;
    }
    MPoly rem = *this, q;
    const Mon& dm = d.leading_mon();
    const Rat& dc = d.leading_coeff();
    while (!rem.is_zero()) {
        const Mon& rm = rem.leading_mon();
        if (!mon_divides(dm, rm)) return std::nullopt;
        Mon qm = mon_div(rm, dm);
        Rat qc = rem.leading_coeff() / dc;
        MPoly t;
        t.add_term(qm, qc);
        q += t;
        rem -= t * d;
    }
    return q;
}

MPoly MPoly::divide_exact(const MPoly& d) const {
    auto q = try_divide(d);
    if (!q) throw std::runtime_error("MPoly::divide_exact: not divisible");
    return *q;
}

namespace {

unsigned deg_in(const MPoly& p, unsigned v) { return p.degree(v); }

// Pseudo-remainder of a by b in variable v (deg_v(a) >= deg_v(b) > 0 not required;
// returns a when deg_v(a) < deg_v(b)).
MPoly prem(const MPoly& a, const MPoly& b, unsigned v) {
    unsigned db = deg_in(b, v);
    auto bc = b.coeffs_in(v);
    MPoly lb = bc.back();
    MPoly r = a;
    while (!r.is_zero() && deg_in(r, v) >= db) {
        auto rc = r.coeffs_in(v);
        unsigned dr = unsigned(rc.size()) - 1;
        MPoly lr = rc.back();
        // r := lb * r - lr * v^(dr-db) * b
        r = lb * r - lr * MPoly::var(v, dr - db) * b;
        if (!r.is_zero() && deg_in(r, v) >= dr) // no progress -> corrupt input
            throw std::logic_error("prem: degree did not drop");
    }
    return r;
}

// gcd of the coefficients of p viewed in variable v.
MPoly content_in(const MPoly& p, unsigned v) {
    auto cs = p.coeffs_in(v);
    MPoly g;
    for (auto& c : cs) {
        if (c.is_zero()) continue;
        g = g.is_zero() ? c.ipp() : MPoly::gcd(g, c);
        if (g.is_constant()) return MPoly(Rat(1));
    }
    return g.is_zero() ? MPoly(Rat(1)) : g;
}

// Largest |coefficient| of an integer-coefficient polynomial.
Int maxnorm(const MPoly& p) {
    Int m = 0;
    for (auto& [mon, c] : p.terms()) {
        Int a = abs(rat_num(c));
        if (a > m) m = a;
    }
    return m;
}

// Substitute the integer xi for variable v (Horner).
MPoly eval_int(const MPoly& p, unsigned v, const Int& xi) {
    auto cs = p.coeffs_in(v);
    MPoly r;
    for (size_t i = cs.size(); i-- > 0;) {
        r *= Rat(xi);
        r += cs[i];
    }
    return r;
}

// Rebuild a polynomial in v from its value at v = xi using balanced base-xi
// digits. Fails (nullopt) if more than max_deg+1 digits appear.
std::optional<MPoly> genpoly(MPoly g, const Int& xi, unsigned v, unsigned max_deg) {
    MPoly G;
    unsigned i = 0;
    for (; !g.is_zero(); ++i) {
        if (i > max_deg) return std::nullopt;
        MPoly digit;
        for (auto& [m, c] : g.terms()) {
            Int r = rat_num(c) % xi;
            if (r * 2 > xi) r -= xi;
            else if (r * 2 <= -xi) r += xi;
            if (r != 0) digit.add_term(m, Rat(r));
        }
        G += digit * MPoly::var(v, i);
        g -= digit;
        g *= Rat(Int(1), xi);
    }
    return G;
}

// Heuristic gcd (GCDHEU) on integer-coefficient polynomials: evaluate at a
// large integer, take the gcd of the images, lift back through balanced
// digits and verify by trial division. Returns the full gcd including the
// integer content, or nullopt when the heuristic gives up.
std::optional<MPoly> gcd_heu(const MPoly& a, const MPoly& b) {
    Int ca = rat_num(a.content_rat()), cb = rat_num(b.content_rat());
    Int c = boost::multiprecision::gcd(ca, cb);
    if (a.is_constant() || b.is_constant()) return MPoly(Rat(c));
    MPoly pa = a.ipp(), pb = b.ipp();

    int v = std::max(pa.max_var(), pb.max_var());
    unsigned da = pa.degree(unsigned(v)), db = pb.degree(unsigned(v));
    if (da == 0 || db == 0) return std::nullopt; // mixed variable sets: use PRS path
    unsigned dmin = std::min(da, db);

    Int xi = 2 * std::min(maxnorm(pa), maxnorm(pb)) + 2;
    for (int attempt = 0; attempt < 6; ++attempt) {
        if (boost::multiprecision::msb(xi) * (dmin + 1) > 400000) return std::nullopt;
        MPoly A = eval_int(pa, unsigned(v), xi), B = eval_int(pb, unsigned(v), xi);
        if (!A.is_zero() && !B.is_zero()) {
            std::optional<MPoly> gamma;
            if (A.is_constant() && B.is_constant())
                gamma = MPoly(Rat(boost::multiprecision::gcd(rat_num(A.constant_value()),
                                                             rat_num(B.constant_value()))));
            else
                gamma = gcd_heu(A, B);
            if (gamma) {
                auto G = genpoly(*gamma, xi, unsigned(v), dmin);
                if (G && !G->is_zero()) {
                    MPoly cand = G->ipp();
                    if (pa.try_divide(cand) && pb.try_divide(cand)) return MPoly(Rat(c)) * cand;
                }
            }
        }
        xi = xi * 73794 / 27011; // next evaluation point (non-algebraic growth)
    }
    return std::nullopt;
}

// ------------------------------------------------------------- modular gcd
//
// Small-prime homomorphic images combined by CRT (Brown's algorithm),
// restricted to the one- and two-variable polynomials that carry nearly all
// of the load. Images use 31-bit primes so products fit in unsigned 64-bit
// arithmetic; the reassembled candidate is always verified by exact trial
// division, so unlucky primes or evaluation points only cost retries.

using u64 = std::uint64_t;

u64 powmod(u64 a, u64 e, u64 p) {
    u64 r = 1;
    a %= p;
    while (e) {
        if (e & 1) r = r * a % p;
        a = a * a % p;
        e >>= 1;
    }
    return r;
}
u64 invmod(u64 a, u64 p) { return powmod(a, p - 2, p); }

const std::vector<u64>& mod_primes() {
    static const std::vector<u64> ps = [] {
        std::vector<u64> v;
        for (u64 n = 2147483647; v.size() < 2500 && n > 2; n -= 2) {
            bool pr = true;
            for (u64 d = 3; d * d <= n; d += 2)
                if (n % d == 0) { pr = false; break; }
            if (pr) v.push_back(n);
        }
        return v;
    }();
    return ps;
}

u64 int_mod(const Int& z, u64 p) {
    Int r = z % Int(p);
    if (r < 0) r += Int(p);
    return r.convert_to<u64>();
}

// Dense univariate polynomials: mod-p images and integer vectors.
using VP = std::vector<u64>;
using VI = std::vector<Int>;

void vp_trim(VP& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}
void vi_trim(VI& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

VP vi_mod(const VI& v, u64 p) {
    VP r(v.size());
    for (size_t i = 0; i < v.size(); ++i) r[i] = int_mod(v[i], p);
    vp_trim(r);
    return r;
}

u64 vp_eval(const VP& a, u64 x, u64 p) {
    u64 r = 0;
    for (size_t i = a.size(); i-- > 0;) r = (r * x + a[i]) % p;
    return r;
}

VP vp_rem(VP a, const VP& b, u64 p) {
    u64 li = invmod(b.back(), p);
    vp_trim(a);
    while (a.size() >= b.size()) {
        u64 f = a.back() * li % p;
        size_t off = a.size() - b.size();
        for (size_t i = 0; i + 1 < b.size(); ++i)
            a[off + i] = (a[off + i] + p - f * b[i] % p) % p;
        a.pop_back();
        vp_trim(a);
    }
    return a;
}

VP vp_gcd(VP a, VP b, u64 p) { // monic
    vp_trim(a);
    vp_trim(b);
    while (!b.empty()) {
        VP r = vp_rem(std::move(a), b, p);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        u64 li = invmod(a.back(), p);
        for (auto& c : a) c = c * li % p;
    }
    return a;
}

// Newton interpolation through (xs[k], ys[k]); nodes distinct mod p.
VP vp_interp(const VP& xs, const VP& ys, u64 p) {
    size_t n = xs.size();
    VP dd = ys;
    for (size_t j = 1; j < n; ++j)
        for (size_t i = n; i-- > j;) {
            u64 den = (xs[i] + p - xs[i - j]) % p;
            dd[i] = (dd[i] + p - dd[i - 1]) % p * invmod(den, p) % p;
        }
    VP poly{dd[n - 1]};
    for (size_t i = n - 1; i-- > 0;) {
        poly.insert(poly.begin(), 0);
        for (size_t k = 0; k + 1 < poly.size(); ++k)
            poly[k] = (poly[k] + p - poly[k + 1] * xs[i] % p) % p;
        poly[0] = (poly[0] + dd[i]) % p;
    }
    vp_trim(poly);
    return poly;
}

// Integer primitive part, leading coefficient made positive.
VI vi_pp(VI a) {
    vi_trim(a);
    if (a.empty()) return a;
    Int g = 0;
    for (auto& c : a) g = boost::multiprecision::gcd(g, c);
    if (a.back() < 0) g = -g;
    for (auto& c : a) c /= g;
    return a;
}

// Exact division of integer polynomials; nullopt if not exact over Z.
std::optional<VI> vi_div(const VI& a, const VI& g) {
    VI r = a, q;
    vi_trim(r);
    if (g.empty()) return r.empty() ? std::optional<VI>(VI{}) : std::nullopt;
    if (r.size() >= g.size()) q.assign(r.size() - g.size() + 1, Int(0));
    while (r.size() >= g.size()) {
        Int qc, qr;
        boost::multiprecision::divide_qr(r.back(), g.back(), qc, qr);
        if (qr != 0) return std::nullopt;
        size_t off = r.size() - g.size();
        q[off] = qc;
        for (size_t i = 0; i + 1 < g.size(); ++i) r[off + i] -= qc * g[i];
        r.pop_back();
        vi_trim(r);
    }
    if (!r.empty()) return std::nullopt;
    return q;
}

// One CRT step: val (symmetric mod M) extended to agree with r mod p.
Int crt_step(const Int& val, const Int& M, u64 r, u64 p) {
    u64 t = (r + p - int_mod(val, p)) % p * invmod(int_mod(M, p), p) % p;
    Int res = val + M * Int(t);
    Int Mp = M * Int(p);
    if (2 * res > Mp) res -= Mp;
    return res;
}

Int vi_cont(const VI& a) {
    Int g = 0;
    for (auto& c : a) g = boost::multiprecision::gcd(g, c);
    return g;
}

// Full gcd in Z[x] (integer content included) of integer polynomials.
std::optional<VI> gcd1_mod(VI a, VI b) {
    vi_trim(a);
    vi_trim(b);
    if (a.empty()) return vi_pp(std::move(b));
    if (b.empty()) return vi_pp(std::move(a));
    Int ic = boost::multiprecision::gcd(vi_cont(a), vi_cont(b));
    a = vi_pp(std::move(a));
    b = vi_pp(std::move(b));
    if (a.size() == 1 || b.size() == 1) return VI{ic};
    Int lcg = boost::multiprecision::gcd(a.back(), b.back());

    std::vector<VI> acc;      // CRT accumulator, symmetric representatives
    Int M = 1;
    size_t dmin = std::min(a.size(), b.size()); // current image degree + 1
    bool have = false, was_stable = false;
    for (u64 p : mod_primes()) {
        if (int_mod(a.back(), p) == 0 || int_mod(b.back(), p) == 0) continue;
        VP gp = vp_gcd(vi_mod(a, p), vi_mod(b, p), p);
        if (gp.size() == 1) return VI{ic}; // sound: p preserves both degrees
        if (have && gp.size() > dmin) continue; // unlucky prime
        u64 s = int_mod(lcg, p);
        for (auto& c : gp) c = c * s % p;
        if (!have || gp.size() < dmin) {
            acc.assign(1, VI(gp.size(), Int(0)));
            acc[0].assign(gp.begin(), gp.end());
            for (auto& c : acc[0])
                if (2 * c > Int(p)) c -= Int(p);
            M = Int(p);
            dmin = gp.size();
            have = true;
            was_stable = false;
            continue;
        }
        bool stable = true;
        for (size_t i = 0; i < dmin; ++i) {
            Int nv = crt_step(acc[0][i], M, gp[i], p);
            if (nv != acc[0][i]) stable = false;
            acc[0][i] = nv;
        }
        M *= Int(p);
        if (stable) {
            VI cand = vi_pp(acc[0]);
            if (vi_div(a, cand) && vi_div(b, cand)) {
                for (auto& c : cand) c *= ic;
                return cand;
            }
            if (was_stable) return std::nullopt; // systematically unlucky
            was_stable = true;
        }
    }
    return std::nullopt;
}

// Content (w.r.t. the outer variable) of a dense bivariate polynomial given
// as outer-coefficient rows.
std::optional<VI> vi_content(const std::vector<VI>& rows) {
    VI g;
    for (auto& r : rows) {
        VI t = r;
        vi_trim(t);
        if (t.empty()) continue;
        if (g.empty()) {
            g = std::move(t);
            if (g.back() < 0)
                for (auto& c : g) c = -c;
        } else {
            auto n = gcd1_mod(g, t);
            if (!n) return std::nullopt;
            g = *n;
        }
        if (g.size() == 1 && g[0] == 1) break;
    }
    return g;
}

MPoly mp_from_vi(const VI& v, unsigned var) {
    MPoly r;
    for (size_t i = 0; i < v.size(); ++i)
        if (v[i] != 0) r += MPoly::var(var, unsigned(i)) * Rat(v[i]);
    return r;
}

MPoly mp_from_xy(const std::vector<VI>& rows) {
    MPoly r;
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < rows[i].size(); ++j)
            if (rows[i][j] != 0) {
                Mon m{unsigned(i), unsigned(j)};
                mon_trim(m);
                MPoly t;
                t.add_term(m, Rat(rows[i][j]));
                r += t;
            }
    return r;
}

// Primitive gcd of integer-primitive polynomials in variables 0 and 1.
std::optional<MPoly> gcd_mod(const MPoly& a, const MPoly& b) {
    unsigned dxa = a.degree(0), dya = a.degree(1);
    unsigned dxb = b.degree(0), dyb = b.degree(1);
    if ((Int(dxa) + 1) * (Int(dya) + 1) > 250000) return std::nullopt;
    if ((Int(dxb) + 1) * (Int(dyb) + 1) > 250000) return std::nullopt;

    auto to_vi = [](const MPoly& f, unsigned var, unsigned d) {
        VI v(d + 1, Int(0));
        for (auto& [m, c] : f.terms()) v[var < m.size() ? m[var] : 0] = rat_num(c);
        return v;
    };
    if (dya == 0 && dyb == 0) {
        auto g = gcd1_mod(to_vi(a, 0, dxa), to_vi(b, 0, dxb));
        return g ? std::optional<MPoly>(mp_from_vi(*g, 0)) : std::nullopt;
    }
    if (dxa == 0 && dxb == 0) {
        auto g = gcd1_mod(to_vi(a, 1, dya), to_vi(b, 1, dyb));
        return g ? std::optional<MPoly>(mp_from_vi(*g, 1)) : std::nullopt;
    }

    auto to_xy = [](const MPoly& f, unsigned dx, unsigned dy) {
        std::vector<VI> rows(dx + 1, VI(dy + 1, Int(0)));
        for (auto& [m, c] : f.terms()) {
            unsigned i = m.size() > 0 ? m[0] : 0;
            unsigned j = m.size() > 1 ? m[1] : 0;
            rows[i][j] = rat_num(c);
        }
        return rows;
    };
    std::vector<VI> A = to_xy(a, dxa, dya), B = to_xy(b, dxb, dyb);

    auto contA = vi_content(A);
    auto contB = vi_content(B);
    if (!contA || !contB) return std::nullopt;
    for (auto& r : A) {
        auto q = vi_div(r, *contA);
        if (!q) return std::nullopt;
        r = *q;
        r.resize(dya + 1, Int(0));
    }
    for (auto& r : B) {
        auto q = vi_div(r, *contB);
        if (!q) return std::nullopt;
        r = *q;
        r.resize(dyb + 1, Int(0));
    }
    auto gc = gcd1_mod(*contA, *contB);
    if (!gc) return std::nullopt;
    MPoly gcont = mp_from_vi(*gc, 1);

    auto top_row = [](const std::vector<VI>& rows) {
        size_t i = rows.size();
        while (i > 0) {
            VI t = rows[i - 1];
            vi_trim(t);
            if (!t.empty()) return i - 1;
            --i;
        }
        return size_t(0);
    };
    size_t dxA = top_row(A), dxB = top_row(B);
    if (dxA == 0 || dxB == 0) return gcont; // a pp part is trivial

    VI lcA = A[dxA], lcB = B[dxB];
    vi_trim(lcA);
    vi_trim(lcB);
    auto Gam = gcd1_mod(lcA, lcB);
    if (!Gam) return std::nullopt;

    auto dy_of = [](const std::vector<VI>& rows) {
        size_t d = 0;
        for (auto& r : rows) {
            VI t = r;
            vi_trim(t);
            if (!t.empty()) d = std::max(d, t.size() - 1);
        }
        return d;
    };
    size_t N = std::min(dy_of(A), dy_of(B)) + (Gam->size() - 1) + 1;

    MPoly ppA = mp_from_xy(A), ppB = mp_from_xy(B);
    std::vector<VI> acc; // candidate rows (x-power -> y-poly), symmetric CRT
    Int M = 1;
    size_t gdx = SIZE_MAX;
    bool have = false;
    int stable_fail = 0;
    for (u64 p : mod_primes()) {
        VP lcAp = vi_mod(lcA, p), lcBp = vi_mod(lcB, p), Gp = vi_mod(*Gam, p);
        if (lcAp.empty() || lcBp.empty() || Gp.size() != Gam->size()) continue;
        std::vector<VP> Ap(dxA + 1), Bp(dxB + 1);
        for (size_t i = 0; i <= dxA; ++i) Ap[i] = vi_mod(A[i], p);
        for (size_t i = 0; i <= dxB; ++i) Bp[i] = vi_mod(B[i], p);

        VP xs;
        std::vector<VP> imgs;
        size_t dxm = SIZE_MAX;
        bool trivial = false;
        // Vary evaluation points across primes so one unlucky β cannot keep
        // feeding every image the same wrong gcd.
        u64 beta0 = (0x9E3779B97F4A7C15ULL ^ (p * 0x2545F4914F6CDD1DULL)) % p;
        for (u64 k = 0; xs.size() < N && k < 4 * N + 64 && k < p; ++k) {
            u64 beta = (beta0 + k) % p;
            if (vp_eval(lcAp, beta, p) == 0 || vp_eval(lcBp, beta, p) == 0) continue;
            VP uA(dxA + 1), uB(dxB + 1);
            for (size_t i = 0; i <= dxA; ++i) uA[i] = vp_eval(Ap[i], beta, p);
            for (size_t i = 0; i <= dxB; ++i) uB[i] = vp_eval(Bp[i], beta, p);
            VP g = vp_gcd(uA, uB, p);
            if (g.size() == 1) { trivial = true; break; } // pp parts coprime
            if (g.size() - 1 > dxm && dxm != SIZE_MAX) continue; // unlucky point
            if (dxm == SIZE_MAX || g.size() - 1 < dxm) {
                dxm = g.size() - 1;
                xs.clear();
                imgs.clear();
            }
            u64 s = vp_eval(Gp, beta, p);
            for (auto& c : g) c = c * s % p;
            xs.push_back(beta);
            imgs.push_back(std::move(g));
        }
        if (trivial) return gcont;
        if (xs.size() < N) continue;
        if (have && dxm > gdx) continue; // unlucky prime
        std::vector<VP> Hp(dxm + 1);
        for (size_t i = 0; i <= dxm; ++i) {
            VP ys(N);
            for (size_t k = 0; k < N; ++k) ys[k] = i < imgs[k].size() ? imgs[k][i] : 0;
            Hp[i] = vp_interp(xs, ys, p);
        }
        if (!have || dxm < gdx) {
            gdx = dxm;
            acc.assign(gdx + 1, VI());
            for (size_t i = 0; i <= gdx; ++i) {
                acc[i].assign(Hp[i].size(), Int(0));
                for (size_t j = 0; j < Hp[i].size(); ++j) {
                    acc[i][j] = Int(Hp[i][j]);
                    if (2 * acc[i][j] > Int(p)) acc[i][j] -= Int(p);
                }
            }
            M = Int(p);
            have = true;
            continue;
        }
        bool stable = true;
        for (size_t i = 0; i <= gdx; ++i) {
            size_t w = std::max(acc[i].size(), Hp[i].size());
            acc[i].resize(w, Int(0));
            for (size_t j = 0; j < w; ++j) {
                Int nv = crt_step(acc[i][j], M, j < Hp[i].size() ? Hp[i][j] : 0, p);
                if (nv != acc[i][j]) stable = false;
                acc[i][j] = nv;
            }
        }
        M *= Int(p);
        if (!stable) continue;
        auto contC = vi_content(acc);
        if (!contC) return std::nullopt;
        std::vector<VI> C = acc;
        bool ok = true;
        for (auto& r : C) {
            auto q = vi_div(r, *contC);
            if (!q) { ok = false; break; }
            r = *q;
        }
        if (ok) {
            MPoly G = mp_from_xy(C).ipp();
            if (ppA.try_divide(G) && ppB.try_divide(G)) return gcont * G;
        }
        if (++stable_fail >= 3) return std::nullopt;
    }
    return std::nullopt;
}

MPoly gcd_prs(const MPoly& a, const MPoly& b) {
    int v = std::max(a.max_var(), b.max_var());
    unsigned da = a.degree(unsigned(v)), db = b.degree(unsigned(v));
    if (da == 0 || db == 0) {
        // v occurs in only one of them: gcd divides that one's content in v.
        const MPoly& with = da ? a : b;
        const MPoly& without = da ? b : a;
        return MPoly::gcd(content_in(with, unsigned(v)), without);
    }

    MPoly ca = content_in(a, unsigned(v)), cb = content_in(b, unsigned(v));
    MPoly cg = MPoly::gcd(ca, cb);
    MPoly pa = a.divide_exact(ca), pb = b.divide_exact(cb);
    if (pa.degree(unsigned(v)) < pb.degree(unsigned(v))) std::swap(pa, pb);

    // Primitive PRS.
    while (true) {
        MPoly r = prem(pa, pb, unsigned(v));
        if (r.is_zero()) break;
        if (r.degree(unsigned(v)) == 0) return cg; // coprime primitive parts
        pa = pb;
        pb = r.divide_exact(content_in(r, unsigned(v))).ipp();
    }
    MPoly g = pb.divide_exact(content_in(pb, unsigned(v))).ipp();
    return cg * g;
}

} // namespace

MPoly MPoly::gcd(const MPoly& a, const MPoly& b) {
    if (a.is_zero()) return b.ipp();
    if (b.is_zero()) return a.ipp();
    if (a.is_constant() || b.is_constant()) return MPoly(Rat(1));
    MPoly pa = a.ipp(), pb = b.ipp();
    if (pa.max_var() <= 1 && pb.max_var() <= 1)
        if (auto g = gcd_mod(pa, pb)) return *g;
    if (auto g = gcd_heu(pa, pb)) return *g;
    return gcd_prs(pa, pb);
}

std::optional<MPoly> MPoly::sqrt_exact() const {
    if (is_zero()) return MPoly();
    if (is_constant()) {
        auto r = rat_sqrt_exact(constant_value());
        if (!r) return std::nullopt;
        return MPoly(*r);
    }
    int v = max_var();
    auto cs = coeffs_in(unsigned(v));
    unsigned d = unsigned(cs.size()) - 1;
    if (d % 2 != 0) return std::nullopt;
    auto top = cs.back().sqrt_exact();
    if (!top) return std::nullopt;
    unsigned m = d / 2;
    std::vector<MPoly> r(m + 1);
    r[m] = *top;
    MPoly two_rm = r[m] * Rat(2);
    for (int k = int(d) - 1; k >= int(m); --k) {
        // coefficient of v^k in r^2 must equal cs[k]
        MPoly acc = k < int(cs.size()) ? cs[k] : MPoly();
        for (int i = k - int(m) + 1; i < int(m); ++i) {
            int j = k - i;
            if (j < 0 || j > int(m) || j <= i) continue;
            acc -= r[i] * r[j] * Rat(2);
        }
        if (k % 2 == 0 && k / 2 < int(m) && k / 2 > k - int(m))
            acc -= r[k / 2] * r[k / 2];
        auto q = acc.try_divide(two_rm);
        if (!q) return std::nullopt;
        r[k - m] = *q;
    }
    MPoly cand = MPoly::from_coeffs(unsigned(v), r);
    if (cand * cand == *this) return cand;
    return std::nullopt;
}

std::string MPoly::str(const std::vector<std::string>& names) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [m, c] = *it;
        if (!first) os << (c > 0 ? " + " : " - ");
        else if (c < 0) os << "-";
        first = false;
        Rat ac = abs(c);
        bool printed = false;
        if (ac != 1 || m.empty()) { os << rat_str(ac); printed = true; }
        for (size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0) continue;
            if (printed) os << "*";
            if (i < names.size()) os << names[i];
            else os << "g" << i;
            if (m[i] > 1) os << "^" << m[i];
            printed = true;
        }
    }
    return os.str();
}

} // namespace fds
