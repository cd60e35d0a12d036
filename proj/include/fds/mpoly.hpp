#ifndef FDS_MPOLY_HPP
#define FDS_MPOLY_HPP

#include "fds/rational.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fds {

// Exponent vector indexed by generator number; trailing zeros trimmed so the
// same monomial compares equal regardless of which tower it was built in.
using Mon = std::vector<unsigned>;

inline void mon_trim(Mon& m) {
    while (!m.empty() && m.back() == 0) m.pop_back();
}

inline unsigned mon_total(const Mon& m) {
    unsigned t = 0;
    for (unsigned e : m) t += e;
    return t;
}

inline Mon mon_mul(const Mon& a, const Mon& b) {
    Mon r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    return r;
}

inline bool mon_divides(const Mon& a, const Mon& b) { // a | b
    if (a.size() > b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

inline Mon mon_div(const Mon& b, const Mon& a) { // b / a
    Mon r = b;
    for (size_t i = 0; i < a.size(); ++i) r[i] -= a[i];
    mon_trim(r);
    return r;
}

// Graded order, ties broken from the highest generator index down.
struct MonLess {
    bool operator()(const Mon& a, const Mon& b) const {
        unsigned ta = mon_total(a), tb = mon_total(b);
        if (ta != tb) return ta < tb;
        size_t n = std::max(a.size(), b.size());
        for (size_t i = n; i-- > 0;) {
            unsigned ea = i < a.size() ? a[i] : 0;
            unsigned eb = i < b.size() ? b[i] : 0;
            if (ea != eb) return ea < eb;
        }
        return false;
    }
};

// Sparse multivariate polynomial over Q.
class MPoly {
public:
    using TermMap = std::map<Mon, Rat, MonLess>;

    MPoly() = default;
    explicit MPoly(const Rat& c) {
        if (c != 0) terms_[Mon{}] = c;
    }
    explicit MPoly(long c) : MPoly(Rat(c)) {}

    static MPoly var(unsigned idx, unsigned exp = 1) {
        MPoly p;
        if (exp == 0) return MPoly(Rat(1));
        Mon m(idx + 1, 0);
        m[idx] = exp;
        p.terms_[m] = 1;
        return p;
    }

    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
    }
    Rat constant_value() const {
        if (terms_.empty()) return Rat(0);
        auto it = terms_.find(Mon{});
        return it == terms_.end() ? Rat(0) : it->second;
    }

    // Highest generator index occurring, or -1 for a constant.
    int max_var() const {
        int mv = -1;
        for (auto& [m, c] : terms_)
            if (!m.empty()) mv = std::max(mv, int(m.size()) - 1);
        return mv;
    }

    unsigned degree(unsigned var) const {
        unsigned d = 0;
        for (auto& [m, c] : terms_)
            if (var < m.size()) d = std::max(d, m[var]);
        return d;
    }

    unsigned total_degree() const {
        unsigned d = 0;
        for (auto& [m, c] : terms_) d = std::max(d, mon_total(m));
        return d;
    }

    const Mon& leading_mon() const { return terms_.rbegin()->first; }
    const Rat& leading_coeff() const { return terms_.rbegin()->second; }

    void add_term(const Mon& m, const Rat& c) {
        if (c == 0) return;
        auto [it, fresh] = terms_.emplace(m, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    MPoly operator-() const {
        MPoly r = *this;
        for (auto& [m, c] : r.terms_) c = -c;
        return r;
    }
    MPoly& operator+=(const MPoly& o) {
        for (auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    MPoly& operator-=(const MPoly& o) {
        for (auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    friend MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
    friend MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }

    friend MPoly operator*(const MPoly& a, const MPoly& b) {
        MPoly r;
        for (auto& [ma, ca] : a.terms_)
            for (auto& [mb, cb] : b.terms_)
                r.add_term(mon_mul(ma, mb), ca * cb);
        return r;
    }
    MPoly& operator*=(const MPoly& o) { return *this = *this * o; }

    MPoly& operator*=(const Rat& c) {
        if (c == 0) { terms_.clear(); return *this; }
        for (auto& [m, v] : terms_) v *= c;
        return *this;
    }
    friend MPoly operator*(MPoly a, const Rat& c) { return a *= c; }
    friend MPoly operator*(const Rat& c, MPoly a) { return a *= c; }

    MPoly pow(unsigned e) const {
        MPoly r(Rat(1)), b = *this;
        while (e) {
            if (e & 1) r *= b;
            b = e > 1 ? b * b : b;
            e >>= 1;
        }
        return r;
    }

    bool operator==(const MPoly& o) const { return terms_ == o.terms_; }
    bool operator!=(const MPoly& o) const { return !(*this == o); }

    MPoly partial(unsigned var) const {
        MPoly r;
        for (auto& [m, c] : terms_) {
            if (var >= m.size() || m[var] == 0) continue;
            Mon n = m;
            n[var] -= 1;
            mon_trim(n);
            r.add_term(n, c * m[var]);
        }
        return r;
    }

    Rat evaluate(const std::vector<Rat>& vals) const;
    // Substitute vals for variables where subst[i] is set; others stay symbolic.
    MPoly eval_partial(const std::vector<std::optional<Rat>>& subst) const;

    // Coefficients of this viewed as a univariate polynomial in `var`.
    std::vector<MPoly> coeffs_in(unsigned var) const;
    static MPoly from_coeffs(unsigned var, const std::vector<MPoly>& cs);

    // Rational c such that (*this)/c has coprime integer coefficients and a
    // positive leading coefficient. Zero polynomial gives 1.
    Rat content_rat() const;
    MPoly ipp() const; // integer primitive part

    MPoly divide_exact(const MPoly& d) const; // throws if not exact
    std::optional<MPoly> try_divide(const MPoly& d) const;

    static MPoly gcd(const MPoly& a, const MPoly& b);

    std::optional<MPoly> sqrt_exact() const;

    std::string str(const std::vector<std::string>& names = {}) const;

private:
    TermMap terms_;
};

} // namespace fds

#endif
