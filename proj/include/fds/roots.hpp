#ifndef FDS_ROOTS_HPP
#define FDS_ROOTS_HPP

#include "fds/upoly.hpp"

#include <vector>

namespace fds {

// All roots of f lying in Q(x,y), for a squarefree univariate f whose
// coefficients are rational functions of x and y only. Every returned root is
// verified by exact substitution. Roots requiring algebraic extensions are not
// produced here (the caller adjoins them explicitly).
std::vector<DElement> rational_function_roots(const UPoly& f);

// Rational roots of a univariate polynomial over Q (no multiplicities).
std::vector<Rat> rational_roots(const std::vector<Rat>& coeffs);

} // namespace fds

#endif
