#include "fds/series.hpp"

#include <sstream>

namespace fds {

TPS TPS::constant(const Rat& c, const Rat& x0, const Rat& y0, int order) {
    TPS r(x0, y0, order);
    r.set_coeff(0, 0, c);
    return r;
}

TPS TPS::var_x(const Rat& x0, const Rat& y0, int order) {
    TPS r = constant(x0, x0, y0, order);
    if (order >= 1) r.set_coeff(1, 0, 1);
    return r;
}

TPS TPS::var_y(const Rat& x0, const Rat& y0, int order) {
    TPS r = constant(y0, x0, y0, order);
    if (order >= 1) r.set_coeff(0, 1, 1);
    return r;
}

Rat TPS::coeff(int p, int q) const {
    if (p < 0 || q < 0) return 0;
    if (p + q > order_) throw std::out_of_range("TPS::coeff beyond held precision");
    auto it = c_.find({p, q});
    return it == c_.end() ? Rat(0) : it->second;
}

void TPS::set_coeff(int p, int q, const Rat& c) {
    if (p < 0 || q < 0 || p + q > order_) throw std::out_of_range("TPS::set_coeff out of range");
    if (c == 0) c_.erase({p, q});
    else c_[{p, q}] = c;
}

bool TPS::is_zero() const { return c_.empty(); }

TPS TPS::truncate(int new_order) const {
    if (new_order >= order_) {
        if (new_order > order_) throw std::invalid_argument("TPS::truncate: cannot gain precision");
        return *this;
    }
    TPS r(x0_, y0_, new_order);
    for (auto& [pq, v] : c_)
        if (pq.first + pq.second <= new_order) r.c_[pq] = v;
    return r;
}

void TPS::check_compat(const TPS& o) const {
    if (x0_ != o.x0_ || y0_ != o.y0_)
        throw std::invalid_argument("TPS: different expansion centers");
}

TPS TPS::operator-() const {
    TPS r = *this;
    for (auto& [pq, v] : r.c_) v = -v;
    return r;
}

TPS operator+(const TPS& a, const TPS& b) {
    a.check_compat(b);
    TPS r(a.x0_, a.y0_, std::min(a.order_, b.order_));
    for (auto& [pq, v] : a.c_)
        if (pq.first + pq.second <= r.order_) r.c_[pq] = v;
    for (auto& [pq, v] : b.c_) {
        if (pq.first + pq.second > r.order_) continue;
        auto& slot = r.c_[pq];
        slot += v;
        if (slot == 0) r.c_.erase(pq);
    }
    return r;
}

TPS operator-(const TPS& a, const TPS& b) { return a + (-b); }

TPS operator*(const TPS& a, const TPS& b) {
    a.check_compat(b);
    TPS r(a.x0_, a.y0_, std::min(a.order_, b.order_));
    for (auto& [pa, va] : a.c_)
        for (auto& [pb, vb] : b.c_) {
            int p = pa.first + pb.first, q = pa.second + pb.second;
            if (p + q > r.order_) continue;
            auto& slot = r.c_[{p, q}];
            slot += va * vb;
            if (slot == 0) r.c_.erase({p, q});
        }
    return r;
}

TPS operator*(const TPS& a, const Rat& c) {
    TPS r = a;
    if (c == 0) {
        r.c_.clear();
        return r;
    }
    for (auto& [pq, v] : r.c_) v *= c;
    return r;
}

bool TPS::agrees_with(const TPS& o) const {
    check_compat(o);
    int n = std::min(order_, o.order_);
    for (int p = 0; p <= n; ++p)
        for (int q = 0; p + q <= n; ++q)
            if (coeff(p, q) != o.coeff(p, q)) return false;
    return true;
}

TPS TPS::derive(Var v) const {
    if (order_ < 0) throw std::logic_error("TPS::derive: no precision left");
    TPS r(x0_, y0_, order_ - 1);
    for (auto& [pq, c] : c_) {
        auto [p, q] = pq;
        if (v == Var::X && p > 0 && p - 1 + q <= r.order_) r.c_[{p - 1, q}] = c * p;
        if (v == Var::Y && q > 0 && p + q - 1 <= r.order_) r.c_[{p, q - 1}] = c * q;
    }
    return r;
}

TPS TPS::inverse() const {
    Rat c0 = coeff(0, 0);
    if (c0 == 0) throw std::domain_error("TPS::inverse: zero constant term (pole)");
    // r = 1/c0 * sum_k (1 - this/c0)^k, truncated
    TPS u = constant(1, x0_, y0_, order_) - (*this) * (Rat(1) / c0);
    TPS r = constant(1, x0_, y0_, order_);
    TPS upow = constant(1, x0_, y0_, order_);
    for (int k = 1; k <= order_; ++k) {
        upow = upow * u;
        if (upow.is_zero()) break;
        r = r + upow;
    }
    return r * (Rat(1) / c0);
}

TPS TPS::pow(unsigned e) const {
    TPS r = constant(1, x0_, y0_, order_), b = *this;
    while (e) {
        if (e & 1) r = r * b;
        if (e >>= 1) b = b * b;
    }
    return r;
}

std::string TPS::str() const {
    if (c_.empty()) return "0 + O(" + std::to_string(order_ + 1) + ")";
    std::ostringstream os;
    bool first = true;
    for (int d = 0; d <= order_; ++d)
        for (int p = d; p >= 0; --p) {
            Rat c = coeff(p, d - p);
            if (c == 0) continue;
            if (!first) os << " + ";
            first = false;
            os << rat_str(c);
            if (p) os << "*X^" << p;
            if (d - p) os << "*Y^" << (d - p);
        }
    os << " + O(" << order_ + 1 << ")";
    return os.str();
}

TPS expand_series(const DElement& a, const Rat& x0, const Rat& y0, int order,
                  const std::map<size_t, TPS>& gen_series) {
    auto expand_poly = [&](const MPoly& p) {
        TPS r(x0, y0, order);
        for (auto& [m, c] : p.terms()) {
            TPS t = TPS::constant(c, x0, y0, order);
            for (size_t i = 0; i < m.size(); ++i) {
                if (m[i] == 0) continue;
                TPS g(x0, y0, order);
                if (i == 0) g = TPS::var_x(x0, y0, order);
                else if (i == 1) g = TPS::var_y(x0, y0, order);
                else {
                    auto it = gen_series.find(i);
                    if (it == gen_series.end())
                        throw std::invalid_argument(
                            "expand_series: no expansion supplied for generator '" +
                            a.tower()->gen(i).name + "'");
                    g = it->second.truncate(std::min(order, it->second.order()));
                }
                t = t * g.pow(m[i]);
            }
            r = r + t;
        }
        return r;
    };
    TPS num = expand_poly(a.num());
    TPS den = expand_poly(a.den());
    if (den.coeff(0, 0) == 0)
        throw std::domain_error("expand_series: pole at the expansion center");
    return num * den.inverse();
}

} // namespace fds
