#ifndef FDS_LINSOLVE_HPP
#define FDS_LINSOLVE_HPP

#include "fds/tower.hpp"

#include <optional>
#include <vector>

namespace fds {

using DVec = std::vector<DElement>;
using DMat = std::vector<DVec>;

// Rank of A over the tower's field.
int lin_rank(const DMat& A, const TowerPtr& t);

// One solution of A x = b with non-pivot unknowns set to zero, or nullopt if
// the system is inconsistent.
std::optional<DVec> lin_solve(const DMat& A, const DVec& b, const TowerPtr& t);

// Basis of { x : A x = 0 }.
std::vector<DVec> lin_nullspace(const DMat& A, const TowerPtr& t);

} // namespace fds

#endif
