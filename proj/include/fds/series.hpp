#ifndef FDS_SERIES_HPP
#define FDS_SERIES_HPP

#include "fds/tower.hpp"

#include <map>
#include <utility>

namespace fds {

// Exact bivariate Taylor expansion around a rational center, truncated at a
// tracked total degree. Operations never report more precision than held.
class TPS {
public:
    TPS() = default;
    TPS(const Rat& x0, const Rat& y0, int order) : x0_(x0), y0_(y0), order_(order) {}

    static TPS constant(const Rat& c, const Rat& x0, const Rat& y0, int order);
    static TPS var_x(const Rat& x0, const Rat& y0, int order); // x = x0 + (x-x0)
    static TPS var_y(const Rat& x0, const Rat& y0, int order);

    const Rat& x0() const { return x0_; }
    const Rat& y0() const { return y0_; }
    int order() const { return order_; }

    Rat coeff(int p, int q) const; // of (x-x0)^p (y-y0)^q
    void set_coeff(int p, int q, const Rat& c);
    bool is_zero() const; // all held coefficients vanish

    TPS truncate(int new_order) const;

    TPS operator-() const;
    friend TPS operator+(const TPS& a, const TPS& b);
    friend TPS operator-(const TPS& a, const TPS& b);
    friend TPS operator*(const TPS& a, const TPS& b);
    friend TPS operator*(const TPS& a, const Rat& c);
    friend TPS operator*(const Rat& c, const TPS& a) { return a * c; }
    TPS& operator+=(const TPS& o) { return *this = *this + o; }
    TPS& operator-=(const TPS& o) { return *this = *this - o; }
    TPS& operator*=(const TPS& o) { return *this = *this * o; }

    // Equality of all coefficients through min(order, o.order).
    bool agrees_with(const TPS& o) const;

    TPS derive(Var v) const;   // order drops by one
    TPS inverse() const;       // requires nonzero constant term
    TPS pow(unsigned e) const;

    std::string str() const;

private:
    void check_compat(const TPS& o) const;
    Rat x0_ = 0, y0_ = 0;
    int order_ = -1;
    std::map<std::pair<int, int>, Rat> c_;
};

// Taylor-expand a tower element. Generators beyond x, y must come with
// caller-supplied expansions (formal generators have no intrinsic values).
TPS expand_series(const DElement& a, const Rat& x0, const Rat& y0, int order,
                  const std::map<size_t, TPS>& gen_series = {});

} // namespace fds

#endif
