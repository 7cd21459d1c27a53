// Continuous piecewise linear functions with integer slopes.

#ifndef TROPLIN_PLF_HPP
#define TROPLIN_PLF_HPP

#include <string>
#include <vector>

#include "troplin/graph.hpp"

namespace troplin {

// Restriction of a function to one edge. x[0] = 0, x.back() = length,
// slope[k] is the slope on [x[k], x[k+1]].
struct EdgeFn {
  std::vector<Q> x;
  std::vector<Q> y;
  std::vector<long> slope;
};

class PLFunction {
 public:
  PLFunction() = default;

  static PLFunction constant(GraphPtr g, const Q& c);
  // Validates integrality of slopes and continuity at vertices.
  static PLFunction from_breakpoints(GraphPtr g, std::vector<EdgeFn> pieces);

  const GraphPtr& graph_ptr() const { return g_; }
  const MetricGraph& graph() const { return *g_; }
  const EdgeFn& on_edge(int e) const { return f_.at(e); }
  const std::vector<EdgeFn>& pieces() const { return f_; }

  Q eval(const GraphPoint& p) const;
  Q eval_edge(int e, const Q& t) const;
  Q vertex_value(int v) const;
  // Slope leaving the point p along edge-end direction; dir = +1 toward head.
  long slope_at(int e, const Q& t, int dir) const;
  Q min_value() const;
  Q max_value() const;

  friend bool operator==(const PLFunction& a, const PLFunction& b);

 private:
  GraphPtr g_;
  std::vector<EdgeFn> f_;
  friend PLFunction make_normalized(GraphPtr g, std::vector<EdgeFn> pieces);
};

PLFunction make_normalized(GraphPtr g, std::vector<EdgeFn> pieces);

PLFunction plf_add(const PLFunction& a, const PLFunction& b);
PLFunction plf_sub(const PLFunction& a, const PLFunction& b);
PLFunction plf_scale(const PLFunction& a, long c);
PLFunction plf_shift(const PLFunction& a, const Q& c);
PLFunction plf_min(const PLFunction& a, const PLFunction& b);
PLFunction plf_min(const std::vector<PLFunction>& fs, const std::vector<Q>& consts);

Divisor divisor_of_function(const PLFunction& psi);
Divisor canonical_divisor(const MetricGraph& g);
Subgraph min_locus(const PLFunction& psi);
// Closed set where psi equals its value c.
Subgraph level_set(const PLFunction& psi, const Q& c);

// All breakpoint offsets of psi on edge e, including both ends.
std::vector<Q> breakpoints(const PLFunction& psi, int e);

struct ShapeEntry {
  GraphPoint point;
  int index;          // region index j
  bool boundary;      // point lies on the boundary of region j
  long delta_mult;    // multiplicity in D + div(theta)
  long region_mult;   // multiplicity in D + div(f_j)
};

struct ShapeReport {
  std::vector<ShapeEntry> witnesses;
  std::vector<ShapeEntry> violations;
  bool ok() const { return violations.empty(); }
};

// funcs are the already shifted functions, theta their pointwise minimum.
ShapeReport shape_lemma_audit(const Divisor& D, const std::vector<PLFunction>& funcs,
                              const PLFunction& theta);

// Outdegree bound: outdeg of the min locus at each point <= deg_v(D).
bool outdegree_bound_holds(const PLFunction& psi, const Divisor& D);

}  // namespace troplin

#endif
