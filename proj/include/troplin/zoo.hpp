// Small named metric graphs.

#ifndef TROPLIN_ZOO_HPP
#define TROPLIN_ZOO_HPP

#include <string>
#include <vector>

#include "troplin/graph.hpp"

namespace troplin {

// Lengths are taken cyclically from `lens`; empty means all 1.
GraphPtr segment_graph(const Q& len);
GraphPtr circle_graph(const std::vector<Q>& lens);  // one edge per arc, >= 1 arcs
GraphPtr theta_graph(const std::vector<Q>& lens = {});
GraphPtr k4_graph(const std::vector<Q>& lens = {});
GraphPtr cube_graph(const std::vector<Q>& lens = {});
GraphPtr petersen_graph(const std::vector<Q>& lens = {});
GraphPtr named_graph(const std::string& name, const std::vector<Q>& lens = {});

}  // namespace troplin

#endif
