#ifndef FDS_RATIONAL_HPP
#define FDS_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <stdexcept>
#include <string>

namespace fds {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int rat_num(const Rat& r) { return numerator(r); }
inline Int rat_den(const Rat& r) { return denominator(r); }

// "p/q" text, "p" when q == 1.
inline std::string rat_str(const Rat& r) {
    std::string s = rat_num(r).str();
    if (rat_den(r) != 1) s += "/" + rat_den(r).str();
    return s;
}

inline Rat rat_parse(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rat(Int(s));
    Int num(s.substr(0, slash)), den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("rational with zero denominator: " + s);
    return Rat(num, den);
}

inline Int factorial(unsigned n) {
    Int r = 1;
    for (unsigned i = 2; i <= n; ++i) r *= i;
    return r;
}

inline Int binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    Int r = 1;
    for (unsigned i = 0; i < k; ++i) { r *= (n - i); r /= (i + 1); }
    return r;
}

inline std::optional<Int> int_sqrt_exact(const Int& n) {
    if (n < 0) return std::nullopt;
    Int r = sqrt(n);
    if (r * r == n) return r;
    return std::nullopt;
}

inline std::optional<Rat> rat_sqrt_exact(const Rat& r) {
    auto n = int_sqrt_exact(rat_num(r));
    auto d = int_sqrt_exact(rat_den(r));
    if (!n || !d) return std::nullopt;
    return Rat(*n, *d);
}

} // namespace fds

#endif
