#include "fds/tower.hpp"

#include <atomic>
#include <sstream>

namespace fds {

namespace {

std::atomic<uint64_t> next_serial{2}; // 0 and 1 are x and y

// Univariate polynomials with DElement coefficients, used for the extended
// Euclid against a minimal polynomial. Coefficient index = power.
using UP = std::vector<DElement>;

void up_trim(UP& p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

int up_deg(const UP& p) { return int(p.size()) - 1; }

UP up_sub(const UP& a, const UP& b) {
    UP r = a;
    if (b.size() > r.size()) {
        DElement z = b[0].tower()->constant(0);
        r.resize(b.size(), z);
    }
    for (size_t i = 0; i < b.size(); ++i) r[i] = r[i] - b[i];
    up_trim(r);
    return r;
}

UP up_mul(const UP& a, const UP& b, const TowerPtr& t) {
    if (a.empty() || b.empty()) return {};
    UP r(a.size() + b.size() - 1, t->constant(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] = r[i + j] + a[i] * b[j];
    up_trim(r);
    return r;
}

// a = q*b + rem over the coefficient field; b nonzero.
void up_divmod(const UP& a, const UP& b, const TowerPtr& t, UP& q, UP& rem) {
    rem = a;
    q.clear();
    int db = up_deg(b);
    DElement lbi = b.back().inverse();
    if (up_deg(rem) >= db) q.assign(up_deg(rem) - db + 1, t->constant(0));
    while (up_deg(rem) >= db) {
        int k = up_deg(rem) - db;
        DElement c = rem.back() * lbi;
        q[k] = c;
        for (int i = 0; i <= db; ++i) rem[i + k] = rem[i + k] - c * b[i];
        rem.pop_back();
        up_trim(rem);
    }
}

UP up_gcd(UP a, UP b, const TowerPtr& t) {
    up_trim(a);
    up_trim(b);
    while (!b.empty()) {
        UP q, r;
        up_divmod(a, b, t, q, r);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

} // namespace

// ---------------------------------------------------------------- DElement

DElement DElement::operator-() const {
    DElement r = *this;
    r.num_ = -r.num_;
    return r;
}

DElement operator+(const DElement& a, const DElement& b) {
    TowerPtr t = Tower::common(a.tower_, b.tower_);
    return t->element(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

DElement operator-(const DElement& a, const DElement& b) {
    TowerPtr t = Tower::common(a.tower_, b.tower_);
    return t->element(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

DElement operator*(const DElement& a, const DElement& b) {
    TowerPtr t = Tower::common(a.tower_, b.tower_);
    return t->element(a.num_ * b.num_, a.den_ * b.den_);
}

DElement operator/(const DElement& a, const DElement& b) {
    TowerPtr t = Tower::common(a.tower_, b.tower_);
    if (b.is_zero()) throw std::domain_error("DElement: division by zero");
    return t->element(a.num_ * b.den_, a.den_ * b.num_);
}

bool DElement::operator==(const DElement& o) const {
    Tower::common(tower_, o.tower_); // validates compatibility
    return num_ == o.num_ && den_ == o.den_;
}

DElement DElement::inverse() const {
    if (is_zero()) throw std::domain_error("DElement: inverse of zero");
    return tower_->element(den_, num_);
}

DElement DElement::pow(int e) const {
    if (e < 0) return inverse().pow(-e);
    DElement r = tower_->constant(1), b = *this;
    unsigned u = unsigned(e);
    while (u) {
        if (u & 1) r = r * b;
        if (u >>= 1) b = b * b;
    }
    return r;
}

DElement DElement::derive(Var v) const {
    if (!tower_) throw std::logic_error("DElement::derive: detached element");
    DElement np = tower_->poly_derive(num_, v);
    DElement dp = tower_->poly_derive(den_, v);
    DElement n = tower_->element(num_);
    DElement d = tower_->element(den_);
    return (np * d - n * dp) / (d * d);
}

DElement DElement::lift(const TowerPtr& bigger) const {
    if (!tower_) throw std::logic_error("DElement::lift: detached element");
    if (bigger.get() == tower_.get()) return *this;
    if (!bigger->extends(*tower_)) throw std::invalid_argument("DElement::lift: not an extension");
    DElement r = *this;
    r.tower_ = bigger;
    return r;
}

std::string DElement::str() const {
    if (!tower_) return "0";
    auto names = tower_->names();
    std::string n = num_.str(names);
    if (den_ == MPoly(Rat(1))) return n;
    std::string d = den_.str(names);
    return "(" + n + ")/(" + d + ")";
}

// ------------------------------------------------------------------ Tower

TowerPtr Tower::base() {
    static TowerPtr b = [] {
        auto t = std::shared_ptr<Tower>(new Tower());
        Gen gx, gy;
        gx.name = "x";
        gx.serial = 0;
        gy.name = "y";
        gy.serial = 1;
        t->gens_ = {gx, gy};
        TowerPtr ct = t;
        t->gens_[0].dx = ct->constant(1);
        t->gens_[0].dy = ct->constant(0);
        t->gens_[1].dx = ct->constant(0);
        t->gens_[1].dy = ct->constant(1);
        return ct;
    }();
    return b;
}

int Tower::find(const std::string& name) const {
    for (size_t i = 0; i < gens_.size(); ++i)
        if (gens_[i].name == name) return int(i);
    return -1;
}

std::vector<std::string> Tower::names() const {
    std::vector<std::string> r;
    r.reserve(gens_.size());
    for (auto& g : gens_) r.push_back(g.name);
    return r;
}

bool Tower::extends(const Tower& other) const {
    if (other.gens_.size() > gens_.size()) return false;
    for (size_t i = 0; i < other.gens_.size(); ++i)
        if (gens_[i].serial != other.gens_[i].serial) return false;
    return true;
}

TowerPtr Tower::common(const TowerPtr& a, const TowerPtr& b) {
    if (!a || !b) throw std::logic_error("operation on detached DElement");
    if (a.get() == b.get()) return a;
    if (a->extends(*b)) return a;
    if (b->extends(*a)) return b;
    throw std::invalid_argument("incompatible towers: " + a->describe() + " vs " + b->describe());
}

int Tower::top_alg_gen(const MPoly& p) const {
    int mv = p.max_var();
    for (int i = mv; i >= 0; --i)
        if (gens_[size_t(i)].kind == Gen::Algebraic && p.degree(unsigned(i)) > 0) return i;
    return -1;
}

void Tower::reduce_alg(MPoly& p, MPoly& den_acc) const {
    for (int i = int(gens_.size()) - 1; i >= 2; --i) {
        const Gen& g = gens_[size_t(i)];
        if (g.kind != Gen::Algebraic) continue;
        unsigned d = unsigned(g.minpoly.size());
        if (p.degree(unsigned(i)) < d) continue;
        // z^d * B = R with B free of algebraic generators.
        MPoly B(Rat(1));
        for (auto& c : g.minpoly) B = B * c.den();
        MPoly R;
        for (unsigned j = 0; j < d; ++j) {
            if (g.minpoly[j].is_zero()) continue;
            R -= g.minpoly[j].num() * B.divide_exact(g.minpoly[j].den()) * MPoly::var(unsigned(i), j);
        }
        while (p.degree(unsigned(i)) >= d) {
            auto cs = p.coeffs_in(unsigned(i));
            unsigned e = unsigned(cs.size()) - 1;
            MPoly top = cs[e] * MPoly::var(unsigned(i), e);
            p = (p - top) * B + cs[e] * MPoly::var(unsigned(i), e - d) * R;
            den_acc *= B;
        }
    }
}

DElement Tower::invert_poly(const MPoly& p) const {
    if (p.is_zero()) throw std::domain_error("DElement: division by zero");
    int zi = top_alg_gen(p);
    if (zi < 0) return make(MPoly(Rat(1)), p);
    TowerPtr self = shared_from_this();
    const Gen& g = gens_[size_t(zi)];
    unsigned d = unsigned(g.minpoly.size());

    UP a;
    for (auto& c : p.coeffs_in(unsigned(zi))) a.push_back(element(c));
    up_trim(a);
    UP mp = g.minpoly;
    mp.push_back(constant(1));

    // Extended Euclid tracking only the cofactor of p: s*p = r (mod minpoly).
    UP r0 = mp, r1 = a;
    UP s0, s1 = {constant(1)};
    while (up_deg(r1) > 0) {
        UP q, rem;
        up_divmod(r0, r1, self, q, rem);
        UP s2 = up_sub(s0, up_mul(q, s1, self));
        r0 = std::move(r1);
        r1 = std::move(rem);
        s0 = std::move(s1);
        s1 = std::move(s2);
        if (r1.empty())
            throw std::domain_error("algebraic generator '" + g.name +
                                    "': minimal polynomial is reducible");
    }
    DElement cinv = r1[0].inverse();
    DElement zel = gen_element(size_t(zi));
    DElement inv = constant(0);
    for (size_t j = 0; j < s1.size(); ++j) inv = inv + s1[j] * cinv * zel.pow(int(j));
    return inv;
}

DElement Tower::make(MPoly num, MPoly den) const {
    if (den.is_zero()) throw std::domain_error("DElement: zero denominator");
    if (std::max(num.max_var(), den.max_var()) >= int(gens_.size()))
        throw std::invalid_argument("element references a generator outside the tower");

    MPoly dn(Rat(1)), dd(Rat(1));
    reduce_alg(num, dn);
    reduce_alg(den, dd);
    num *= dd;
    den *= dn;
    if (den.is_zero()) throw std::domain_error("DElement: denominator is zero in the tower");
    if (top_alg_gen(den) >= 0) {
        DElement inv = invert_poly(den);
        num *= inv.num_;
        den = inv.den_;
        MPoly extra(Rat(1));
        reduce_alg(num, extra);
        den *= extra;
    }
    if (num.is_zero()) {
        DElement r;
        r.tower_ = shared_from_this();
        return r;
    }
    MPoly g = MPoly::gcd(num, den);
    if (!g.is_constant() || g.constant_value() != 1) {
        num = num.divide_exact(g);
        den = den.divide_exact(g);
    }
    Rat lc = den.leading_coeff();
    if (lc != 1) {
        num *= Rat(1) / lc;
        den *= Rat(1) / lc;
    }
    DElement r;
    r.tower_ = shared_from_this();
    r.num_ = std::move(num);
    r.den_ = std::move(den);
    return r;
}

DElement Tower::element(MPoly num, MPoly den) const {
    return make(std::move(num), std::move(den));
}

const DElement& Tower::gen_derivative(size_t i, Var v) const {
    const Gen& g = gens_[i];
    const auto& o = (v == Var::X) ? g.dx : g.dy;
    if (!o)
        throw std::domain_error("derivative of generator '" + g.name +
                                "' is not available (jet depth exceeded)");
    return *o;
}

DElement Tower::poly_derive(const MPoly& p, Var v) const {
    DElement r = constant(0);
    int mv = p.max_var();
    for (int i = 0; i <= mv; ++i) {
        MPoly pi = p.partial(unsigned(i));
        if (pi.is_zero()) continue;
        r = r + element(pi) * gen_derivative(size_t(i), v);
    }
    return r;
}

std::string Tower::describe() const {
    std::ostringstream os;
    os << "Q(";
    for (size_t i = 0; i < gens_.size(); ++i) {
        if (i) os << ",";
        os << gens_[i].name;
    }
    os << ")";
    return os.str();
}

// -------------------------------------------------------------- adjunction

Tower::Adjoined Tower::adjoin_algebraic(const std::string& name,
                                        const std::vector<DElement>& minpoly_coeffs) const {
    size_t d = minpoly_coeffs.size();
    if (d == 0) throw std::invalid_argument("adjoin_algebraic: empty minimal polynomial");
    TowerPtr self = shared_from_this();
    std::vector<DElement> cs;
    for (auto& c : minpoly_coeffs) cs.push_back(c.lift(self));
    if (d == 1) return {self, -cs[0], size_t(-1)};
    if (find(name) >= 0) throw std::invalid_argument("generator name in use: " + name);
    if (cs[0].is_zero())
        throw std::domain_error("adjoin_algebraic: reducible (constant term is zero)");
    if (d == 2) {
        DElement disc = cs[1] * cs[1] / Rat(4) - cs[0];
        if (try_sqrt(disc))
            throw std::domain_error("adjoin_algebraic: reducible (discriminant is a square)");
    } else {
        // Higher degrees: verify squarefreeness; full irreducibility is the
        // caller's responsibility.
        UP g = cs;
        g.push_back(constant(1));
        UP gp;
        for (size_t i = 1; i < g.size(); ++i) gp.push_back(g[i] * Rat(long(i)));
        up_trim(gp);
        if (up_deg(up_gcd(g, gp, self)) > 0)
            throw std::domain_error("adjoin_algebraic: minimal polynomial is not squarefree");
    }

    auto nt = std::shared_ptr<Tower>(new Tower());
    nt->parent_ = self;
    nt->gens_ = gens_;
    Gen g;
    g.kind = Gen::Algebraic;
    g.name = name;
    g.serial = next_serial++;
    nt->gens_.push_back(g);
    size_t zi = nt->gens_.size() - 1;
    TowerPtr ct = nt;
    for (auto& c : cs) nt->gens_[zi].minpoly.push_back(c.lift(ct));

    DElement z = ct->gen_element(zi);
    DElement gprime = ct->constant(Rat(long(d))) * z.pow(int(d) - 1);
    for (size_t i = 1; i < d; ++i)
        gprime = gprime + nt->gens_[zi].minpoly[i] * Rat(long(i)) * z.pow(int(i) - 1);
    if (gprime.is_zero()) throw std::logic_error("adjoin_algebraic: inseparable in char 0");
    for (Var v : {Var::X, Var::Y}) {
        DElement gd = ct->constant(0);
        for (size_t i = 0; i < d; ++i)
            gd = gd + cs[i].derive(v).lift(ct) * z.pow(int(i));
        DElement zd = -gd / gprime;
        (v == Var::X ? nt->gens_[zi].dx : nt->gens_[zi].dy) = zd;
    }
    return {ct, z, zi};
}

Tower::Adjoined Tower::adjoin_differential(const std::string& name, const DElement& dxv,
                                           const DElement& dyv) const {
    TowerPtr self = shared_from_this();
    if (find(name) >= 0) throw std::invalid_argument("generator name in use: " + name);
    DElement a = dxv.lift(self), b = dyv.lift(self);
    if (a.derive(Var::Y) != b.derive(Var::X))
        throw std::domain_error("adjoin_differential: d_y(dx) != d_x(dy), not integrable");
    auto nt = std::shared_ptr<Tower>(new Tower());
    nt->parent_ = self;
    nt->gens_ = gens_;
    Gen g;
    g.kind = Gen::Differential;
    g.name = name;
    g.serial = next_serial++;
    nt->gens_.push_back(g);
    size_t i = nt->gens_.size() - 1;
    TowerPtr ct = nt;
    nt->gens_[i].dx = a.lift(ct);
    nt->gens_[i].dy = b.lift(ct);
    return {ct, ct->gen_element(i), i};
}

Tower::Adjoined Tower::adjoin_char_jet(const std::string& name, const DElement& c1,
                                       const DElement& c2, const DElement& c3, Var orient,
                                       int depth) const {
    if (depth < 1) throw std::invalid_argument("adjoin_char_jet: depth must be >= 1");
    TowerPtr self = shared_from_this();
    if (find(name) >= 0) throw std::invalid_argument("generator name in use: " + name);
    auto nt = std::shared_ptr<Tower>(new Tower());
    nt->parent_ = self;
    nt->gens_ = gens_;
    size_t b = nt->gens_.size();
    char suffix = (orient == Var::Y) ? 'y' : 'x';
    for (int k = 0; k <= depth; ++k) {
        Gen g;
        g.kind = Gen::CharJet;
        g.name = k == 0 ? name : name + "_" + std::string(size_t(k), suffix);
        g.serial = next_serial++;
        g.family_base = b;
        (orient == Var::Y ? g.jet_r : g.jet_l) = k;
        nt->gens_.push_back(g);
    }
    TowerPtr ct = nt;
    // Jet direction links: d w_k = w_{k+1} along the jet variable.
    for (int k = 0; k < depth; ++k) {
        DElement next = ct->gen_element(b + size_t(k) + 1);
        (orient == Var::Y ? nt->gens_[b + size_t(k)].dy : nt->gens_[b + size_t(k)].dx) = next;
    }
    // Cross derivatives from the defining relation, differentiated along jets.
    DElement w0 = ct->gen_element(b);
    DElement w1 = ct->gen_element(b + 1);
    DElement rel = c1.lift(ct) * w1 + c2.lift(ct) * w0 + c3.lift(ct);
    for (int k = 0; k < depth; ++k) {
        (orient == Var::Y ? nt->gens_[b + size_t(k)].dx : nt->gens_[b + size_t(k)].dy) = rel;
        if (k + 1 < depth) rel = rel.derive(orient);
    }
    return {ct, w0, b};
}

Tower::Adjoined Tower::adjoin_free_jet(const std::string& name, int depth) const {
    if (depth < 0) throw std::invalid_argument("adjoin_free_jet: negative depth");
    TowerPtr self = shared_from_this();
    if (find(name) >= 0) throw std::invalid_argument("generator name in use: " + name);
    auto nt = std::shared_ptr<Tower>(new Tower());
    nt->parent_ = self;
    nt->gens_ = gens_;
    size_t b = nt->gens_.size();
    for (int t = 0; t <= depth; ++t) {
        for (int l = 0; l <= t; ++l) {
            Gen g;
            g.kind = Gen::FreeJet;
            g.name = (t == 0) ? name
                              : name + "_" + std::to_string(l) + "_" + std::to_string(t - l);
            g.serial = next_serial++;
            g.family_base = b;
            g.jet_l = l;
            g.jet_r = t - l;
            nt->gens_.push_back(g);
        }
    }
    TowerPtr ct = nt;
    for (int t = 0; t < depth; ++t) {
        for (int l = 0; l <= t; ++l) {
            size_t idx = b + size_t(t) * size_t(t + 1) / 2 + size_t(l);
            nt->gens_[idx].dx = ct->free_jet(b, l + 1, t - l);
            nt->gens_[idx].dy = ct->free_jet(b, l, t - l + 1);
        }
    }
    return {ct, ct->gen_element(b), b};
}

DElement Tower::free_jet(size_t base_idx, int l, int r) const {
    if (l < 0 || r < 0) throw std::invalid_argument("free_jet: negative jet order");
    int t = l + r;
    size_t idx = base_idx + size_t(t) * size_t(t + 1) / 2 + size_t(l);
    if (idx >= gens_.size() || gens_[idx].kind != Gen::FreeJet ||
        gens_[idx].family_base != base_idx || gens_[idx].jet_l != l || gens_[idx].jet_r != r)
        throw std::out_of_range("free_jet: jet outside the family depth");
    return gen_element(idx);
}

DElement Tower::char_jet(size_t base_idx, int k) const {
    size_t idx = base_idx + size_t(k);
    if (k < 0 || idx >= gens_.size() || gens_[idx].kind != Gen::CharJet ||
        gens_[idx].family_base != base_idx)
        throw std::out_of_range("char_jet: jet outside the family depth");
    return gen_element(idx);
}

// ---------------------------------------------------------------- try_sqrt

namespace {

std::optional<DElement> sqrt_rec(const Tower& t, const DElement& e, int top) {
    TowerPtr self = e.tower();
    if (e.is_zero()) return self->constant(0);
    int zi = -1;
    for (int i = top; i >= 2; --i)
        if (t.gen(size_t(i)).kind == Gen::Algebraic) { zi = i; break; }
    if (zi < 0) {
        auto s = (e.num() * e.den()).sqrt_exact();
        if (!s) return std::nullopt;
        return self->element(*s, e.den());
    }
    const Gen& g = t.gen(size_t(zi));
    if (g.minpoly.size() != 2) return sqrt_rec(t, e, zi - 1);
    DElement p = g.minpoly[1].lift(self), r = g.minpoly[0].lift(self);
    DElement zel = self->gen_element(size_t(zi));

    auto cs = e.num().coeffs_in(unsigned(zi));
    DElement alpha = self->element(cs[0], e.den());
    DElement beta = cs.size() > 1 ? self->element(cs[1], e.den()) : self->constant(0);

    if (beta.is_zero()) {
        if (auto u = sqrt_rec(t, alpha, zi - 1)) return u;
        DElement q = p * p / Rat(4) - r;
        if (!q.is_zero()) {
            if (auto v = sqrt_rec(t, alpha / q, zi - 1)) {
                DElement cand = p * (*v) / Rat(2) + (*v) * zel;
                if (cand * cand == e) return cand;
            }
        }
        return std::nullopt;
    }
    // u + v*z with v != 0: t = v^2 solves (p^2-4r) t^2 + (2p*beta-4*alpha) t + beta^2 = 0.
    DElement A = p * p - Rat(4) * r;
    DElement B = Rat(2) * p * beta - Rat(4) * alpha;
    DElement C = beta * beta;
    DElement disc = B * B - Rat(4) * A * C;
    auto sd = sqrt_rec(t, disc, zi - 1);
    if (!sd) return std::nullopt;
    for (int sign : {1, -1}) {
        DElement tv = (-B + Rat(sign) * (*sd)) / (Rat(2) * A);
        if (tv.is_zero()) continue;
        auto v = sqrt_rec(t, tv, zi - 1);
        if (!v) continue;
        DElement u = (beta / (*v) + p * (*v)) / Rat(2);
        DElement cand = u + (*v) * zel;
        if (cand * cand == e) return cand;
    }
    return std::nullopt;
}

} // namespace

std::optional<DElement> Tower::try_sqrt(const DElement& e) const {
    TowerPtr self = shared_from_this();
    DElement el = e.lift(self);
    auto r = sqrt_rec(*this, el, int(gens_.size()) - 1);
    if (r && !((*r) * (*r) == el)) throw std::logic_error("try_sqrt: verification failed");
    return r;
}

} // namespace fds
