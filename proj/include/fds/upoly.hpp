#ifndef FDS_UPOLY_HPP
#define FDS_UPOLY_HPP

#include "fds/tower.hpp"

#include <vector>

namespace fds {

// Univariate polynomial with tower-element coefficients (commutative; the
// indeterminate is formal). Coefficient index = power.
class UPoly {
public:
    explicit UPoly(TowerPtr t) : t_(std::move(t)) {}
    UPoly(TowerPtr t, std::vector<DElement> cs) : t_(std::move(t)), c_(std::move(cs)) {
        for (auto& e : c_) e = e.lift(t_);
        trim();
    }
    static UPoly constant(const TowerPtr& t, const DElement& c) { return UPoly(t, {c}); }
    static UPoly variable(const TowerPtr& t) { return UPoly(t, {t->constant(0), t->constant(1)}); }

    const TowerPtr& tower() const { return t_; }
    int degree() const { return int(c_.size()) - 1; } // -1 for zero
    bool is_zero() const { return c_.empty(); }
    DElement coeff(size_t i) const { return i < c_.size() ? c_[i] : t_->constant(0); }
    const DElement& lc() const {
        if (c_.empty()) throw std::logic_error("UPoly::lc of zero");
        return c_.back();
    }
    void set_coeff(size_t i, const DElement& v) {
        if (i >= c_.size()) c_.resize(i + 1, t_->constant(0));
        c_[i] = v.lift(t_);
        trim();
    }

    UPoly operator-() const {
        UPoly r = *this;
        for (auto& e : r.c_) e = -e;
        return r;
    }
    friend UPoly operator+(const UPoly& a, const UPoly& b) {
        UPoly r = a;
        if (b.c_.size() > r.c_.size()) r.c_.resize(b.c_.size(), r.t_->constant(0));
        for (size_t i = 0; i < b.c_.size(); ++i) r.c_[i] = r.c_[i] + b.c_[i];
        r.trim();
        return r;
    }
    friend UPoly operator-(const UPoly& a, const UPoly& b) { return a + (-b); }
    friend UPoly operator*(const UPoly& a, const UPoly& b) {
        UPoly r(a.t_);
        if (a.is_zero() || b.is_zero()) return r;
        r.c_.assign(a.c_.size() + b.c_.size() - 1, a.t_->constant(0));
        for (size_t i = 0; i < a.c_.size(); ++i)
            for (size_t j = 0; j < b.c_.size(); ++j)
                r.c_[i + j] = r.c_[i + j] + a.c_[i] * b.c_[j];
        r.trim();
        return r;
    }
    friend UPoly operator*(const UPoly& a, const DElement& s) {
        UPoly r = a;
        for (auto& e : r.c_) e = e * s;
        r.trim();
        return r;
    }
    bool operator==(const UPoly& o) const {
        if (c_.size() != o.c_.size()) return false;
        for (size_t i = 0; i < c_.size(); ++i)
            if (c_[i] != o.c_[i]) return false;
        return true;
    }
    bool operator!=(const UPoly& o) const { return !(*this == o); }

    // a = q * b + r over the coefficient field.
    static void divmod(const UPoly& a, const UPoly& b, UPoly& q, UPoly& r) {
        if (b.is_zero()) throw std::domain_error("UPoly: division by zero");
        q = UPoly(a.t_);
        r = a;
        DElement li = b.lc().inverse();
        if (r.degree() >= b.degree())
            q.c_.assign(size_t(r.degree() - b.degree()) + 1, a.t_->constant(0));
        while (r.degree() >= b.degree()) {
            size_t k = size_t(r.degree() - b.degree());
            DElement f = r.lc() * li;
            q.c_[k] = f;
            for (size_t i = 0; i < b.c_.size(); ++i) r.c_[i + k] = r.c_[i + k] - f * b.c_[i];
            r.c_.pop_back();
            r.trim();
        }
        q.trim();
    }
    UPoly div_exact(const UPoly& b) const {
        UPoly q(t_), r(t_);
        divmod(*this, b, q, r);
        if (!r.is_zero()) throw std::runtime_error("UPoly::div_exact: not divisible");
        return q;
    }

    UPoly monic() const {
        if (is_zero()) return *this;
        return *this * lc().inverse();
    }

    static UPoly gcd(UPoly a, UPoly b) {
        while (!b.is_zero()) {
            UPoly q(a.t_), r(a.t_);
            divmod(a, b, q, r);
            a = std::move(b);
            b = std::move(r);
        }
        return a.monic();
    }

    UPoly derivative() const {
        UPoly r(t_);
        for (size_t i = 1; i < c_.size(); ++i)
            r.set_coeff(i - 1, c_[i] * Rat(long(i)));
        return r;
    }

    DElement eval(const DElement& z) const {
        DElement r = t_->constant(0);
        for (size_t i = c_.size(); i-- > 0;) r = r * z + c_[i];
        return r;
    }

    // Yun's squarefree decomposition: returns parts[k] (k >= 1) with
    // *this = lc * prod parts[k]^k and each part squarefree, pairwise coprime.
    std::vector<UPoly> squarefree_parts() const {
        std::vector<UPoly> parts;
        if (degree() < 1) return parts;
        UPoly f = monic();
        UPoly fp = f.derivative();
        UPoly a = gcd(f, fp);
        UPoly b = f.div_exact(a), c = fp.div_exact(a), d = c - b.derivative();
        while (true) {
            UPoly g = gcd(b, d);
            parts.push_back(g);
            if (b.degree() == g.degree()) break; // remaining factor exhausted
            b = b.div_exact(g);
            c = d.div_exact(g);
            d = c - b.derivative();
        }
        while (!parts.empty() && parts.back().degree() == 0) parts.pop_back();
        return parts;
    }

private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
    TowerPtr t_;
    std::vector<DElement> c_;
};

} // namespace fds

#endif
