#ifndef FDS_FRACDERIV_HPP
#define FDS_FRACDERIV_HPP

#include "fds/lpdo.hpp"
#include "fds/series.hpp"

#include <map>
#include <memory>

namespace fds {

// Symbol G = G_{s_2,...,s_{k0}}(f_1,...,f_{k0}) with the differentiation rule
//   d G^{(s)} = (d f_1) G^{(1+s)} + (d f_2) G^{(s_2+s)} + ... (Definition 1).
struct GSymbol;
using GSymbolPtr = std::shared_ptr<const GSymbol>;

struct GSymbol {
    TowerPtr t;
    std::vector<DElement> f; // f_1 .. f_{k0}
    std::vector<Rat> s;      // s_1 = 1, then s_2 > ... > s_{k0}, all in (0,1)
    long q = 1;              // lcm of the exponent denominators

    // frac_exps are s_2,...,s_{k0}; must be strictly decreasing in (0,1).
    static GSymbolPtr make(const TowerPtr& t, std::vector<DElement> fs,
                           std::vector<Rat> frac_exps = {});
    size_t k0() const { return f.size(); }
};

// Finitely supported sum of h_s G^{(s)} over a fixed symbol.
class FracElement {
public:
    explicit FracElement(GSymbolPtr g) : g_(std::move(g)) {}
    static FracElement term(const GSymbolPtr& g, const Rat& s, const DElement& h);

    const GSymbolPtr& sym() const { return g_; }
    const std::map<Rat, DElement>& terms() const { return c_; }
    DElement coeff(const Rat& s) const;
    bool is_zero() const { return c_.empty(); }
    void set_coeff(const Rat& s, const DElement& h);

    FracElement operator-() const;
    friend FracElement operator+(const FracElement& a, const FracElement& b);
    friend FracElement operator-(const FracElement& a, const FracElement& b);
    friend FracElement operator*(const DElement& c, const FracElement& a);
    bool operator==(const FracElement& o) const { return (*this - o).is_zero(); }
    bool operator!=(const FracElement& o) const { return !(*this == o); }

    // Definition 1 applied to every term.
    FracElement derive(Var v) const;

    std::string str() const;

private:
    GSymbolPtr g_;
    std::map<Rat, DElement> c_;
};

// T(h G^{(s0)}) by iterated application of Definition 1 (y-derivatives
// applied innermost, so results are reproducible bit-for-bit).
FracElement expand_apply(const LPDO& T, const DElement& h, const Rat& s0, const GSymbolPtr& G);

// Same value through the closed partition/multinomial formula of Lemma 1;
// must agree with expand_apply exactly.
FracElement expand_apply_closed(const LPDO& T, const DElement& h, const Rat& s0,
                                const GSymbolPtr& G);

// Specialization of Remark "specialisation": for constants {c_{i/q}},
//   G^{(s)} = sum c_{-s-j_1-j_2 s_2-...} f_1^{j_1}/j_1! ... f_{k0}^{j_{k0}}/j_{k0}!
// truncated at total degree N in the f_i. Series coordinates are (f_1, f_2)
// (k0 <= 2), centered at 0. Throws std::invalid_argument on a missing
// constant reachable within the truncation.
std::map<Rat, TPS> specialize(const GSymbolPtr& G, const std::map<Rat, Rat>& consts, int N,
                              const std::vector<Rat>& exponents);

// Characteristic relation adjoined as a jet family:
//   orient Y: d_x f = c1 d_y f + c2 f + c3   (jets are d_y^k f)
//   orient X: d_y f = c1 d_x f + c2 f + c3   (jets are d_x^k f)
struct JetExtension {
    TowerPtr tower;
    size_t base = 0;
    Var orient = Var::Y;
    int depth = 0;

    DElement f() const { return tower->char_jet(base, 0); }
    DElement jet(int k) const { return tower->char_jet(base, k); }
};

// Wraps Tower::adjoin_char_jet and verifies the commutation invariant
// d_x(d^k f) = d^k(d_x f) through min(depth-1, 3).
JetExtension adjoin_characteristic(const TowerPtr& t, const std::string& name,
                                   const DElement& c1, const DElement& c2, const DElement& c3,
                                   Var orient, int depth);

// Truncated fractional-derivatives series sum h_i G^{(s0 - i/q)} (Eq. (1)).
struct FracSeries {
    GSymbolPtr G;
    Rat s0 = 0;                 // q*s0 must be integral
    std::vector<DElement> h;    // h_0, h_1, ..., h_N with h_0 != 0
    int verified_depth = 0;     // leading expansion coefficients proven zero
};

struct VerifyResult {
    int verified_depth = 0;
    std::optional<Rat> first_fail; // exponent of the first nonzero coefficient
};

// Expands T(S) and checks the coefficients at the top `depth` exponents
// (from s0 + order(T) downward in steps of 1/q) are exactly zero.
VerifyResult verify_series(const LPDO& T, const FracSeries& S, int depth);

} // namespace fds

#endif
