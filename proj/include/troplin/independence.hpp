// Tropical dependence: verification, decision and the theta/Delta apparatus.

#ifndef TROPLIN_INDEPENDENCE_HPP
#define TROPLIN_INDEPENDENCE_HPP

#include <optional>
#include <string>
#include <vector>

#include "troplin/chain.hpp"
#include "troplin/lp.hpp"
#include "troplin/plf.hpp"

namespace troplin {

// b[i] is the constant added to funcs[i].
using Combination = std::vector<Q>;

struct TwiceReport {
  bool holds = true;
  std::optional<GraphPoint> failing;
  std::vector<int> winners;  // minimizers at the failing point
};

TwiceReport verify_twice(const std::vector<PLFunction>& funcs, const Combination& b);

struct ThetaAnalysis {
  PLFunction theta;
  Divisor Delta;
  std::vector<long> delta;  // delta[k] = deg(Delta restricted to gamma_k), k = 0..g+1
  std::vector<long> e;      // e[k] = delta[0] + ... + delta[k] - 2k
};

// Requires m D + div(funcs[i]) effective for every i.
ThetaAnalysis theta_analysis(const Chain& c, const std::vector<PLFunction>& funcs,
                             const Combination& b, const Divisor& D, long m);

// One linear cell of the common refinement of a family.
struct Cell {
  int edge = 0;
  Q x0, x1;
  std::vector<long> slope;  // per function
  std::vector<Q> value;     // per function, at x0
};

// A tie pattern on a cell: pieces of the lower envelope from left to right,
// each given by two functions with the same slope. Slopes strictly decrease.
struct TiePiece {
  long slope = 0;
  int a = 0, b = 0;
};
using Pattern = std::vector<TiePiece>;

std::vector<Cell> common_cells(const std::vector<PLFunction>& funcs);
// Cells with identical constraint structure are merged.
std::vector<Cell> distinct_cells(const std::vector<Cell>& cells);
std::vector<Pattern> cell_patterns(const Cell& c);
// Linear constraints on b equivalent to: the envelope on the cell is the pattern.
std::vector<LinCon> pattern_constraints(const Cell& c, const Pattern& p);

enum class Verdict { Dependent, Independent, Undecided };
std::string verdict_name(Verdict v);

struct SearchBranch {
  int pattern = 0;   // index into cell_patterns(cell)
  int child = -1;    // node index, or -1 for an infeasible leaf
};

struct SearchNode {
  int cell = 0;      // index into distinct_cells
  std::vector<SearchBranch> branches;
};

struct DependenceTrace {
  long cells = 0;
  long distinct = 0;
  long feasibility_calls = 0;
  std::vector<SearchNode> nodes;  // nodes[0] is the root of an exhaustion tree
};

struct DependenceOutcome {
  Verdict verdict = Verdict::Undecided;
  Combination witness;  // Dependent only; min b = 0
  DependenceTrace trace;
};

long default_budget();  // TROPLIN_BUDGET or 10^6
DependenceOutcome decide_dependence(const std::vector<PLFunction>& funcs, long budget);

// Re-checks an Independent trace: every node covers all patterns of its cell
// and every leaf's accumulated constraint system is infeasible.
bool replay_independence(const std::vector<PLFunction>& funcs, const DependenceTrace& t,
                         std::string* why = nullptr);

struct Anchor {
  GraphPoint point;
  std::vector<int> winners;
};

struct PatternSolution {
  std::optional<Combination> b;
  bool unique = false;  // participating constants determined up to a global shift
  std::string reason;
};

PatternSolution solve_pattern(const std::vector<PLFunction>& funcs,
                              const std::vector<Anchor>& anchors);

}  // namespace troplin

#endif
