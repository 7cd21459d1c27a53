#include "troplin/noether.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "troplin/reduced.hpp"

namespace troplin {

namespace {

// Unit capacity flow on an undirected multigraph; flow[e] in {-1, 0, 1},
// positive from tail to head.
bool augment(const MetricGraph& g, int s, int t, const std::vector<bool>& removed,
             std::vector<int>& flow) {
  const int n = g.num_vertices();
  std::vector<int> via(n, -1);
  std::vector<bool> seen(n, false);
  std::vector<int> queue = {s};
  seen[s] = true;
  for (size_t q = 0; q < queue.size() && !seen[t]; ++q) {
    int x = queue[q];
    for (const EdgeEnd& ee : g.incident(x)) {
      const Edge& E = g.edge(ee.edge);
      if ((!removed.empty() && removed[ee.edge]) || E.u == E.v) continue;
      int y = g.endpoint({ee.edge, 1 - ee.end});
      int dir = ee.end == 0 ? 1 : -1;  // +1 when leaving x through the tail
      if (flow[ee.edge] == dir) continue;
      if (seen[y]) continue;
      seen[y] = true;
      via[y] = ee.edge;
      queue.push_back(y);
    }
  }
  if (!seen[t]) return false;
  for (int y = t; y != s;) {
    int e = via[y];
    const Edge& E = g.edge(e);
    if (E.v == y) {
      flow[e] += 1;
      y = E.u;
    } else {
      flow[e] -= 1;
      y = E.v;
    }
  }
  return true;
}

}  // namespace

int max_edge_paths(const MetricGraph& g, int s, int t, const std::vector<bool>& removed) {
  if (s == t) throw std::invalid_argument("max_edge_paths: equal endpoints");
  std::vector<int> flow(g.num_edges(), 0);
  int value = 0;
  while (augment(g, s, t, removed, flow)) ++value;
  return value;
}

int edge_connectivity(const MetricGraph& g) {
  const int n = g.num_vertices();
  if (n < 2) return 0;
  int best = -1;
  for (int t = 1; t < n; ++t) {
    int f = max_edge_paths(g, 0, t);
    if (best < 0 || f < best) best = f;
  }
  return best;
}

bool is_trivalent_3ec(const MetricGraph& g) {
  for (int v = 0; v < g.num_vertices(); ++v)
    if (g.valence(v) != 3) return false;
  return edge_connectivity(g) >= 3;
}

LoopPair edge_loop_pair(GraphPtr gp, int e) {
  const MetricGraph& g = *gp;
  const Edge& E = g.edge(e);
  if (E.u == E.v) throw std::invalid_argument("edge_loop_pair: self-loop");
  std::vector<bool> removed(g.num_edges(), false);
  removed[e] = true;
  std::vector<int> flow(g.num_edges(), 0);
  for (int k = 0; k < 2; ++k)
    if (!augment(g, E.u, E.v, removed, flow))
      throw std::invalid_argument("edge_loop_pair: fewer than two disjoint paths");
  // Decompose the flow into two paths from E.u to E.v.
  std::vector<bool> used(g.num_edges(), false);
  std::vector<std::vector<int>> paths;
  for (int k = 0; k < 2; ++k) {
    std::vector<int> path;
    int x = E.u;
    std::set<int> visited = {x};
    while (x != E.v) {
      int next = -1, y = -1;
      for (const EdgeEnd& ee : g.incident(x)) {
        int dir = ee.end == 0 ? 1 : -1;
        if (used[ee.edge] || flow[ee.edge] != dir) continue;
        next = ee.edge;
        y = g.endpoint({ee.edge, 1 - ee.end});
        break;
      }
      if (next < 0) throw std::logic_error("edge_loop_pair: broken flow");
      used[next] = true;
      path.push_back(next);
      x = y;
      if (!visited.insert(x).second) throw std::logic_error("edge_loop_pair: path revisits a vertex");
    }
    paths.push_back(path);
  }
  LoopPair lp{e, paths[0], paths[1], Subgraph(gp), Subgraph(gp)};
  auto with_e = [&](std::vector<int> p) {
    p.push_back(e);
    return Subgraph::from_edges(gp, p);
  };
  lp.loop1 = with_e(lp.path1);
  lp.loop2 = with_e(lp.path2);
  if (!is_embedded_circle(lp.loop1) || !is_embedded_circle(lp.loop2))
    throw std::logic_error("edge_loop_pair: loop is not an embedded circle");
  // The loops must meet exactly in the closed edge e.
  std::set<int> v1, v2;
  for (int f : lp.path1) {
    v1.insert(g.edge(f).u);
    v1.insert(g.edge(f).v);
  }
  for (int f : lp.path2) {
    v2.insert(g.edge(f).u);
    v2.insert(g.edge(f).v);
  }
  for (int v : v1)
    if (v2.count(v) && v != E.u && v != E.v)
      throw std::logic_error("edge_loop_pair: loops share a vertex off the edge");
  return lp;
}

PLFunction psi_edge(GraphPtr g, const LoopPair& lp) {
  return plf_add(loop_min_function(g, lp.loop1).psi, loop_min_function(g, lp.loop2).psi);
}

PLFunction psi_edge(GraphPtr g, int e) { return psi_edge(g, edge_loop_pair(g, e)); }

namespace {

NoetherEntry make_entry(GraphPtr g, int e, const Divisor& K2) {
  NoetherEntry en{e, edge_loop_pair(g, e), PLFunction(), false, false};
  en.psi = psi_edge(g, en.loops);
  en.locus_is_edge = min_locus(en.psi) == Subgraph::from_edges(g, {e});
  en.in_2K = (K2 + divisor_of_function(en.psi)).effective();
  return en;
}

}  // namespace

NoetherCertificate noether_certify(GraphPtr g, long brute_budget) {
  if (!is_trivalent_3ec(*g)) throw std::invalid_argument("graph is not trivalent and 3-edge-connected");
  NoetherCertificate c;
  c.genus = g->betti();
  Divisor K2 = canonical_divisor(*g).scaled(2);
  for (int e = 0; e < g->num_edges(); ++e) c.entries.push_back(make_entry(g, e, K2));
  c.count_ok = static_cast<int>(c.entries.size()) == 3 * c.genus - 3;
  c.distinct = true;
  for (size_t a = 0; a < c.entries.size(); ++a)
    for (size_t b = a + 1; b < c.entries.size(); ++b)
      if (c.entries[a].edge == c.entries[b].edge) c.distinct = false;
  c.certified = c.count_ok && c.distinct;
  for (const auto& en : c.entries) c.certified = c.certified && en.locus_is_edge && en.in_2K;
  if (brute_budget > 0) {
    std::vector<PLFunction> fs;
    for (const auto& en : c.entries) fs.push_back(en.psi);
    c.brute = decide_dependence(fs, brute_budget).verdict;
  }
  return c;
}

bool verify_noether(GraphPtr g, const NoetherCertificate& c, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (!is_trivalent_3ec(*g)) return fail("graph is not trivalent and 3-edge-connected");
  if (static_cast<int>(c.entries.size()) != 3 * g->betti() - 3) return fail("wrong number of functions");
  Divisor K2 = canonical_divisor(*g).scaled(2);
  std::set<int> edges;
  for (const auto& en : c.entries) {
    if (en.edge < 0 || en.edge >= g->num_edges()) return fail("edge out of range");
    if (!edges.insert(en.edge).second) return fail("two functions share a minimum edge");
    if (!(min_locus(en.psi) == Subgraph::from_edges(g, {en.edge})))
      return fail("minimum locus is not edge " + std::to_string(en.edge));
    if (!(K2 + divisor_of_function(en.psi)).effective())
      return fail("function for edge " + std::to_string(en.edge) + " is not a section of 2K");
  }
  return c.certified || fail("certificate not marked certified");
}

}  // namespace troplin
