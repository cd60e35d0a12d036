#include "fds/lpdo.hpp"

#include "fds/roots.hpp"

#include <sstream>

namespace fds {

LPDO LPDO::monomial(const TowerPtr& t, unsigned i, unsigned j, const DElement& c) {
    LPDO r(t);
    r.set_coeff(i, j, c);
    return r;
}

DElement LPDO::coeff(unsigned i, unsigned j) const {
    auto it = c_.find({i, j});
    return it == c_.end() ? t_->constant(0) : it->second;
}

void LPDO::set_coeff(unsigned i, unsigned j, const DElement& c) {
    DElement v = c.lift(t_);
    if (v.is_zero()) c_.erase({i, j});
    else c_[{i, j}] = v;
}

int LPDO::order() const {
    int n = -1;
    for (auto& [ij, c] : c_) n = std::max(n, int(ij.first + ij.second));
    return n;
}

unsigned LPDO::order_dx() const {
    unsigned n = 0;
    for (auto& [ij, c] : c_) n = std::max(n, ij.first);
    return n;
}

unsigned LPDO::order_dy() const {
    unsigned n = 0;
    for (auto& [ij, c] : c_) n = std::max(n, ij.second);
    return n;
}

LPDO LPDO::operator-() const {
    LPDO r = *this;
    for (auto& [ij, c] : r.c_) c = -c;
    return r;
}

LPDO operator+(const LPDO& a, const LPDO& b) {
    TowerPtr t = Tower::common(a.t_, b.t_);
    LPDO r(t);
    r.c_ = a.c_;
    if (t != a.t_)
        for (auto& [ij, c] : r.c_) c = c.lift(t);
    for (auto& [ij, c] : b.c_) r.set_coeff(ij.first, ij.second, r.coeff(ij.first, ij.second) + c);
    return r;
}

LPDO operator-(const LPDO& a, const LPDO& b) { return a + (-b); }

namespace {

// d_v ∘ Q expanded by the Leibniz rule.
LPDO d_compose(Var v, const LPDO& Q) {
    LPDO r(Q.tower());
    for (auto& [ij, c] : Q.coeffs()) {
        auto [i, j] = ij;
        unsigned ni = i + (v == Var::X ? 1 : 0), nj = j + (v == Var::Y ? 1 : 0);
        r.set_coeff(ni, nj, r.coeff(ni, nj) + c);
        DElement dc = c.derive(v);
        if (!dc.is_zero()) r.set_coeff(i, j, r.coeff(i, j) + dc);
    }
    return r;
}

} // namespace

LPDO operator*(const LPDO& a, const LPDO& b) {
    TowerPtr t = Tower::common(a.t_, b.t_);
    LPDO r(t);
    for (auto& [ij, c] : a.c_) {
        LPDO tmp = b.lift(t);
        for (unsigned k = 0; k < ij.second; ++k) tmp = d_compose(Var::Y, tmp);
        for (unsigned k = 0; k < ij.first; ++k) tmp = d_compose(Var::X, tmp);
        r += c.lift(t) * tmp;
    }
    return r;
}

LPDO operator*(const DElement& c, const LPDO& a) {
    TowerPtr t = Tower::common(c.tower(), a.t_);
    LPDO r(t);
    for (auto& [ij, v] : a.c_) r.set_coeff(ij.first, ij.second, c.lift(t) * v.lift(t));
    return r;
}

bool LPDO::operator==(const LPDO& o) const { return (*this - o).is_zero(); }

LPDO LPDO::pow(unsigned e) const {
    LPDO r = one(t_), b = *this;
    while (e) {
        if (e & 1) r = r * b;
        if (e >>= 1) b = b * b;
    }
    return r;
}

namespace {

DElement derivative_cached(std::map<std::pair<unsigned, unsigned>, DElement>& cache, unsigned i,
                           unsigned j) {
    auto it = cache.find({i, j});
    if (it != cache.end()) return it->second;
    DElement v = i > 0 ? derivative_cached(cache, i - 1, j).derive(Var::X)
                       : derivative_cached(cache, 0, j - 1).derive(Var::Y);
    cache[{i, j}] = v;
    return v;
}

} // namespace

DElement LPDO::apply(const DElement& f) const {
    TowerPtr t = Tower::common(t_, f.tower());
    DElement r = t->constant(0);
    std::map<std::pair<unsigned, unsigned>, DElement> cache;
    cache[{0, 0}] = f.lift(t);
    for (auto& [ij, c] : c_) r = r + c.lift(t) * derivative_cached(cache, ij.first, ij.second);
    return r;
}

LPDO LPDO::graded_part(unsigned p) const {
    LPDO r(t_);
    for (auto& [ij, c] : c_)
        if (ij.first + ij.second == p) r.set_coeff(ij.first, ij.second, c);
    return r;
}

LPDO LPDO::adjoint() const {
    LPDO r(t_);
    for (auto& [ij, c] : c_) {
        LPDO m = monomial(t_, 0, 0, c);
        for (unsigned k = 0; k < ij.second; ++k) m = d_compose(Var::Y, m);
        for (unsigned k = 0; k < ij.first; ++k) m = d_compose(Var::X, m);
        if ((ij.first + ij.second) % 2) m = -m;
        r += m;
    }
    return r;
}

LPDO LPDO::linear_transform(const Rat& a11, const Rat& a12, const Rat& a21,
                            const Rat& a22) const {
    LPDO nx = t_->constant(a11) * dx(t_) + t_->constant(a12) * dy(t_);
    LPDO ny = t_->constant(a21) * dx(t_) + t_->constant(a22) * dy(t_);
    LPDO r(t_);
    for (auto& [ij, c] : c_) r += c * (nx.pow(ij.first) * ny.pow(ij.second));
    return r;
}

LPDO LPDO::lift(const TowerPtr& bigger) const {
    LPDO r(bigger);
    for (auto& [ij, c] : c_) r.set_coeff(ij.first, ij.second, c.lift(bigger));
    return r;
}

std::string LPDO::str() const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    // highest order first
    std::vector<std::pair<std::pair<unsigned, unsigned>, DElement>> terms(c_.begin(), c_.end());
    std::sort(terms.begin(), terms.end(), [](auto& a, auto& b) {
        unsigned ta = a.first.first + a.first.second, tb = b.first.first + b.first.second;
        if (ta != tb) return ta > tb;
        return a.first.first > b.first.first;
    });
    for (auto& [ij, c] : terms) {
        if (!first) os << " + ";
        first = false;
        bool unit = c.is_one();
        bool printed = false;
        if (!unit || (ij.first == 0 && ij.second == 0)) {
            os << "(" << c.str() << ")";
            printed = true;
        }
        if (ij.first) {
            if (printed) os << "*";
            os << "Dx";
            if (ij.first > 1) os << "^" << ij.first;
            printed = true;
        }
        if (ij.second) {
            if (printed) os << "*";
            os << "Dy";
            if (ij.second > 1) os << "^" << ij.second;
        }
    }
    return os.str();
}

// ------------------------------------------------------------------ symbol

bool Symbol::is_zero() const {
    for (auto& e : b)
        if (!e.is_zero()) return false;
    return true;
}

DElement Symbol::eval(const DElement& xi, const DElement& eta) const {
    DElement r = tower->constant(0);
    unsigned p = degree();
    for (unsigned j = 0; j < b.size(); ++j) r = r + b[j] * xi.pow(int(j)) * eta.pow(int(p - j));
    return r;
}

Symbol Symbol::operator*(const Symbol& o) const {
    TowerPtr t = Tower::common(tower, o.tower);
    Symbol r;
    r.tower = t;
    r.b.assign(b.size() + o.b.size() - 1, t->constant(0));
    for (size_t i = 0; i < b.size(); ++i)
        for (size_t j = 0; j < o.b.size(); ++j)
            r.b[i + j] = r.b[i + j] + b[i].lift(t) * o.b[j].lift(t);
    return r;
}

std::string Symbol::str() const {
    std::ostringstream os;
    unsigned p = degree();
    bool first = true;
    for (size_t j = b.size(); j-- > 0;) {
        if (b[j].is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        os << "(" << b[j].str() << ")";
        if (j) os << "*xi" << (j > 1 ? "^" + std::to_string(j) : "");
        if (p - j) os << "*eta" << (p - j > 1 ? "^" + std::to_string(p - j) : "");
    }
    return first ? "0" : os.str();
}

Symbol symbol_of(const LPDO& T) {
    Symbol s;
    s.tower = T.tower();
    int n = T.order();
    if (n < 0) return s;
    s.b.assign(size_t(n) + 1, T.tower()->constant(0));
    for (auto& [ij, c] : T.coeffs())
        if (int(ij.first + ij.second) == n) s.b[ij.first] = c;
    return s;
}

SymbolFactors symbol_linear_factors(const Symbol& s) {
    if (s.is_zero()) throw std::invalid_argument("symbol_linear_factors: zero symbol");
    TowerPtr t = s.tower;
    SymbolFactors out;
    out.unit = t->constant(1);
    unsigned p = s.degree();

    // dehomogenize at eta = 1: f(u) with u = xi/eta
    UPoly f(t, s.b);
    unsigned d = unsigned(std::max(f.degree(), 0));
    if (d < p) out.linear.push_back({t->constant(0), t->constant(1), p - d});
    out.unit = f.lc();
    f = f.monic();

    auto parts = f.squarefree_parts();
    for (size_t k = 0; k < parts.size(); ++k) {
        UPoly g = parts[k];
        unsigned m = unsigned(k) + 1;
        if (g.degree() < 1) continue;
        // peel linear and rational-function roots
        std::vector<DElement> roots;
        if (g.degree() == 1) {
            roots.push_back(-g.coeff(0));
            g = UPoly::constant(t, t->constant(1));
        } else {
            for (auto& r : rational_function_roots(g)) {
                roots.push_back(r);
                g = g.div_exact(UPoly(t, {-r, t->constant(1)}));
            }
        }
        if (g.degree() == 1) {
            roots.push_back(-g.coeff(0) / g.coeff(1));
            g = UPoly::constant(t, t->constant(1));
        }
        if (g.degree() == 2) {
            // quadratic formula within the tower
            DElement c2 = g.coeff(2), c1 = g.coeff(1), c0 = g.coeff(0);
            DElement disc = c1 * c1 - Rat(4) * c2 * c0;
            if (auto sq = t->try_sqrt(disc)) {
                roots.push_back((-c1 + *sq) / (Rat(2) * c2));
                roots.push_back((-c1 - *sq) / (Rat(2) * c2));
                g = UPoly::constant(t, t->constant(1));
            }
        }
        for (auto& u0 : roots) out.linear.push_back({t->constant(1), -u0, m});
        if (g.degree() >= 1) out.residual.push_back({g.monic(), m});
    }
    return out;
}

unsigned mult_of(const LPDO& T, const DElement& a1, const DElement& a2) {
    Symbol s = symbol_of(T);
    if (s.is_zero()) return 0;
    TowerPtr t = Tower::common(s.tower, Tower::common(a1.tower(), a2.tower()));
    UPoly f(t, s.b);
    unsigned p = s.degree();
    if (a1.is_zero()) {
        if (a2.is_zero()) throw std::invalid_argument("mult_of: zero direction");
        return p - unsigned(std::max(f.degree(), 0));
    }
    DElement u0 = -a2.lift(t) / a1.lift(t); // root of f for factor a1 xi + a2 eta
    UPoly lin(t, {-u0, t->constant(1)});
    unsigned m = 0;
    while (f.degree() >= 1) {
        UPoly q(t), r(t);
        UPoly::divmod(f, lin, q, r);
        if (!r.is_zero()) break;
        ++m;
        f = q;
    }
    return m;
}

DivisionResult divide_by_first_order(const LPDO& T, const LPDO& L) {
    if (L.order() != 1) throw std::invalid_argument("divide_by_first_order: L must have order 1");
    TowerPtr t = Tower::common(T.tower(), L.tower());
    DElement c = L.coeff(1, 0).lift(t);
    if (c.is_zero())
        throw std::invalid_argument("divide_by_first_order: coefficient of d_x must be nonzero");
    LPDO Lhat = c.inverse() * L.lift(t); // d_x + a d_y + b
    LPDO R = T.lift(t), Q(t);
    while (R.order_dx() >= 1) {
        unsigned i = R.order_dx();
        LPDO part(t);
        for (auto& [ij, cc] : R.coeffs())
            if (ij.first == i) part.set_coeff(i - 1, ij.second, cc);
        Q += part;
        R -= part * Lhat;
    }
    DivisionResult res{Q * LPDO::monomial(t, 0, 0, c.inverse()), R};
    if (res.quotient * L.lift(t) + res.remainder != T.lift(t))
        throw std::logic_error("divide_by_first_order: re-multiplication check failed");
    return res;
}

} // namespace fds
