// Exact rational linear feasibility.

#ifndef TROPLIN_LP_HPP
#define TROPLIN_LP_HPP

#include <optional>
#include <utility>
#include <vector>

#include "troplin/rational.hpp"

namespace troplin {

// sum coef * y  (>= or ==)  rhs, over free variables y.
struct LinCon {
  std::vector<std::pair<int, Q>> coef;
  Q rhs;
  bool eq = false;
};

// Returns a feasible point or nullopt. Phase-one simplex with Bland's rule.
std::optional<std::vector<Q>> lp_feasible(int nvars, const std::vector<LinCon>& cons);

}  // namespace troplin

#endif
