// Edge functions on trivalent 3-edge-connected graphs and their independence.

#ifndef TROPLIN_NOETHER_HPP
#define TROPLIN_NOETHER_HPP

#include <optional>
#include <string>
#include <vector>

#include "troplin/independence.hpp"
#include "troplin/plf.hpp"

namespace troplin {

// Largest number of edge-disjoint paths between two distinct vertices.
int max_edge_paths(const MetricGraph& g, int s, int t, const std::vector<bool>& removed = {});
// Minimum edge cut over all vertex pairs; 0 for disconnected graphs.
int edge_connectivity(const MetricGraph& g);
bool is_trivalent_3ec(const MetricGraph& g);

struct LoopPair {
  int edge = 0;
  std::vector<int> path1, path2;  // edges of two disjoint paths between the ends of edge
  Subgraph loop1, loop2;
};

LoopPair edge_loop_pair(GraphPtr g, int e);
PLFunction psi_edge(GraphPtr g, const LoopPair& lp);
PLFunction psi_edge(GraphPtr g, int e);

struct NoetherEntry {
  int edge = 0;
  LoopPair loops;
  PLFunction psi;
  bool locus_is_edge = false;  // min_locus(psi) is exactly the closed edge
  bool in_2K = false;          // 2K + div(psi) effective
};

struct NoetherCertificate {
  int genus = 0;
  std::vector<NoetherEntry> entries;
  bool count_ok = false;     // 3g - 3 functions
  bool distinct = false;     // the loci are pairwise different edges
  bool certified = false;
  std::optional<Verdict> brute;  // decide_dependence verdict, when run
};

// brute_budget > 0 also runs decide_dependence on the family.
NoetherCertificate noether_certify(GraphPtr g, long brute_budget = 0);
bool verify_noether(GraphPtr g, const NoetherCertificate& c, std::string* why = nullptr);

}  // namespace troplin

#endif
