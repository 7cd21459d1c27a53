// Reduced divisors on metric graphs and canonical sections for loops.

#ifndef TROPLIN_REDUCED_HPP
#define TROPLIN_REDUCED_HPP

#include <optional>

#include "troplin/plf.hpp"

namespace troplin {

struct ReductionResult {
  Divisor reduced;
  PLFunction psi;  // reduced = D + div(psi), psi(q) = 0
  GraphPoint q;
  int firing_rounds = 0;
};

ReductionResult reduce(GraphPtr g, const Divisor& D, const GraphPoint& q);

// Burning test: true when D is effective off q and the fire from q consumes everything.
bool is_reduced(const MetricGraph& g, const Divisor& D, const GraphPoint& q);

struct EffectiveRep {
  Divisor E;
  PLFunction psi;  // E = D + div(psi)
};

std::optional<EffectiveRep> effective_representative(GraphPtr g, const Divisor& D);

// Edges that lie on no cycle.
std::vector<int> bridge_edges(const MetricGraph& g, const std::vector<bool>& removed);

struct LoopSection {
  PLFunction psi;                   // K + div(psi) >= punctures
  std::vector<GraphPoint> punctures;
};

LoopSection loop_min_function(GraphPtr g, const Subgraph& loop);

bool is_embedded_circle(const Subgraph& s);

}  // namespace troplin

#endif
