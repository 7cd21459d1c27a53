#include "troplin/reduced.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <stdexcept>

namespace troplin {

namespace {

// Subdivision of G by a finite point set. Node 0..nv-1 are the graph vertices.
struct Model {
  std::vector<GraphPoint> nodes;
  std::map<GraphPoint, int> index;
  struct Seg {
    int e;
    Q t0, t1;
    int a, b;
  };
  std::vector<Seg> segs;
  std::vector<std::vector<int>> inc;  // segment ids, a self-loop appears twice
  std::vector<std::vector<int>> by_edge;
};

Model build_model(const MetricGraph& g, const std::vector<GraphPoint>& extra) {
  Model m;
  auto add_node = [&](const GraphPoint& p) {
    auto [it, fresh] = m.index.emplace(p, static_cast<int>(m.nodes.size()));
    if (fresh) m.nodes.push_back(p);
    return it->second;
  };
  for (int v = 0; v < g.num_vertices(); ++v) add_node(g.vertex_point(v));
  std::vector<std::vector<Q>> cuts(g.num_edges());
  for (const auto& p : extra) {
    add_node(p);
    if (!g.vertex_at(p)) cuts[p.edge].push_back(p.t);
  }
  m.inc.resize(m.nodes.size());
  m.by_edge.resize(g.num_edges());
  for (int e = 0; e < g.num_edges(); ++e) {
    auto& c = cuts[e];
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    std::vector<Q> ts;
    ts.push_back(0);
    ts.insert(ts.end(), c.begin(), c.end());
    ts.push_back(g.edge(e).len);
    for (size_t k = 0; k + 1 < ts.size(); ++k) {
      int a = m.index.at(g.point(e, ts[k]));
      int b = m.index.at(g.point(e, ts[k + 1]));
      int id = static_cast<int>(m.segs.size());
      m.segs.push_back({e, ts[k], ts[k + 1], a, b});
      m.inc[a].push_back(id);
      m.inc[b].push_back(id);
      m.by_edge[e].push_back(id);
    }
  }
  return m;
}

std::vector<GraphPoint> support_points(const Divisor& D, const GraphPoint& q) {
  std::vector<GraphPoint> pts;
  for (const auto& kv : D.terms()) pts.push_back(kv.first);
  pts.push_back(q);
  return pts;
}

// Function given by node values; each segment is realized concavely with
// integer slopes ceil(s) then floor(s).
PLFunction realize(GraphPtr g, const Model& m, const std::vector<Q>& val) {
  std::vector<EdgeFn> pieces(g->num_edges());
  for (int e = 0; e < g->num_edges(); ++e) {
    EdgeFn& f = pieces[e];
    for (int sid : m.by_edge[e]) {
      const auto& s = m.segs[sid];
      Q L = s.t1 - s.t0;
      Q fa = val[s.a], fb = val[s.b];
      if (f.x.empty()) {
        f.x.push_back(s.t0);
        f.y.push_back(fa);
      }
      Q slope = (fb - fa) / L;
      if (!is_integer(slope)) {
        Z fl = floor_q(slope);
        Q x = (fb - fa) - Q(fl) * L;
        f.x.push_back(s.t0 + x);
        f.y.push_back(fa + Q(fl + 1) * x);
      }
      f.x.push_back(s.t1);
      f.y.push_back(fb);
    }
  }
  return PLFunction::from_breakpoints(std::move(g), std::move(pieces));
}

// Solves A x = b exactly; A is square and nonsingular.
std::vector<Q> solve_exact(std::vector<std::vector<Q>> A, std::vector<Q> b) {
  const size_t n = b.size();
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    while (piv < n && A[piv][c] == 0) ++piv;
    if (piv == n) throw std::runtime_error("singular Laplacian");
    std::swap(A[piv], A[c]);
    std::swap(b[piv], b[c]);
    for (size_t r = 0; r < n; ++r) {
      if (r == c || A[r][c] == 0) continue;
      Q f = A[r][c] / A[c][c];
      for (size_t k = c; k < n; ++k) A[r][k] -= f * A[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<Q> x(n);
  for (size_t i = 0; i < n; ++i) x[i] = b[i] / A[i][i];
  return x;
}

bool effective_off(const Divisor& D, const GraphPoint& q) {
  for (const auto& [p, n] : D.terms())
    if (n < 0 && !(p == q)) return false;
  return true;
}

// Moves D to a divisor that is effective away from q.
PLFunction make_effective_off_q(GraphPtr g, const Divisor& D, const GraphPoint& q) {
  Model m = build_model(*g, support_points(D, q));
  const int n = static_cast<int>(m.nodes.size());
  const int qi = m.index.at(q);
  std::vector<int> col(n, -1);
  int k = 0;
  for (int v = 0; v < n; ++v)
    if (v != qi) col[v] = k++;
  std::vector<std::vector<Q>> A(k, std::vector<Q>(k));
  std::vector<Q> rhs(k);
  for (int v = 0; v < n; ++v) {
    if (v == qi) continue;
    int r = col[v];
    rhs[r] = Q(D.at(m.nodes[v]) - static_cast<long>(m.inc[v].size()) + 1);
    for (int sid : m.inc[v]) {
      const auto& s = m.segs[sid];
      if (s.a == s.b) continue;
      int u = s.a == v ? s.b : s.a;
      Q w = 1 / (s.t1 - s.t0);
      A[r][r] -= w;
      if (u != qi) A[r][col[u]] += w;
    }
  }
  std::vector<Q> x = k > 0 ? solve_exact(A, rhs) : std::vector<Q>{};
  std::vector<Q> val(n);
  for (int v = 0; v < n; ++v) val[v] = v == qi ? Q(0) : x[col[v]];
  return realize(g, m, val);
}

struct Burn {
  std::vector<bool> burnt;
  std::vector<int> hits;  // burnt segment ends reaching each node
  bool all = false;
};

Burn burn(const Model& m, const Divisor& D, int qi) {
  Burn b;
  const int n = static_cast<int>(m.nodes.size());
  b.burnt.assign(n, false);
  b.hits.assign(n, 0);
  std::vector<bool> seg_burnt(m.segs.size(), false);
  std::deque<int> queue{qi};
  b.burnt[qi] = true;
  int count = 1;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int sid : m.inc[v]) {
      if (seg_burnt[sid]) continue;
      seg_burnt[sid] = true;
      const auto& s = m.segs[sid];
      int u = s.a == v ? s.b : s.a;
      if (b.burnt[u]) continue;
      if (++b.hits[u] > D.at(m.nodes[u])) {
        b.burnt[u] = true;
        ++count;
        queue.push_back(u);
      }
    }
  }
  b.all = count == n;
  return b;
}

}  // namespace

bool is_reduced(const MetricGraph& g, const Divisor& D, const GraphPoint& q) {
  if (!effective_off(D, q)) return false;
  Model m = build_model(g, support_points(D, q));
  return burn(m, D, m.index.at(q)).all;
}

ReductionResult reduce(GraphPtr g, const Divisor& D, const GraphPoint& q) {
  if (!g->valid_point(q)) throw std::invalid_argument("base point is not canonical");
  for (const auto& kv : D.terms())
    if (!g->valid_point(kv.first)) throw std::invalid_argument("divisor point is not canonical");
  ReductionResult res;
  res.q = q;
  PLFunction psi = PLFunction::constant(g, 0);
  Divisor cur = D;
  if (!effective_off(cur, q)) {
    psi = make_effective_off_q(g, cur, q);
    cur = D + divisor_of_function(psi);
    if (!effective_off(cur, q)) throw std::logic_error("pre-step left negative chips");
  }
  for (;;) {
    Model m = build_model(*g, support_points(cur, q));
    const int qi = m.index.at(q);
    Burn b = burn(m, cur, qi);
    if (b.all) break;
    ++res.firing_rounds;
    Q eps;
    bool have = false;
    for (const auto& s : m.segs) {
      if (b.burnt[s.a] == b.burnt[s.b]) continue;
      Q L = s.t1 - s.t0;
      if (!have || L < eps) {
        eps = L;
        have = true;
      }
    }
    if (!have) throw std::logic_error("unburnt region without boundary");
    std::vector<EdgeFn> pieces(g->num_edges());
    for (int e = 0; e < g->num_edges(); ++e) {
      EdgeFn& f = pieces[e];
      for (int sid : m.by_edge[e]) {
        const auto& s = m.segs[sid];
        Q fa = b.burnt[s.a] ? eps : Q(0);
        Q fb = b.burnt[s.b] ? eps : Q(0);
        if (f.x.empty()) {
          f.x.push_back(s.t0);
          f.y.push_back(fa);
        }
        if (!b.burnt[s.a] && b.burnt[s.b] && s.t1 - s.t0 > eps) {
          f.x.push_back(s.t0 + eps);
          f.y.push_back(eps);
        } else if (b.burnt[s.a] && !b.burnt[s.b] && s.t1 - s.t0 > eps) {
          f.x.push_back(s.t1 - eps);
          f.y.push_back(eps);
        }
        f.x.push_back(s.t1);
        f.y.push_back(fb);
      }
    }
    PLFunction phi = PLFunction::from_breakpoints(g, std::move(pieces));
    cur = cur + divisor_of_function(phi);
    psi = plf_add(psi, phi);
  }
  psi = plf_shift(psi, -psi.eval(q));
  if (!(D + divisor_of_function(psi) == cur)) throw std::logic_error("witness mismatch");
  res.reduced = std::move(cur);
  res.psi = std::move(psi);
  return res;
}

std::optional<EffectiveRep> effective_representative(GraphPtr g, const Divisor& D) {
  GraphPoint q = g->vertex_point(0);
  ReductionResult r = reduce(g, D, q);
  if (r.reduced.at(q) < 0) return std::nullopt;
  return EffectiveRep{r.reduced, r.psi};
}

std::vector<int> bridge_edges(const MetricGraph& g, const std::vector<bool>& removed) {
  const int n = g.num_vertices();
  std::vector<int> disc(n, -1), low(n, 0);
  std::vector<int> out;
  int timer = 0;
  std::function<void(int, int)> dfs = [&](int v, int via) {
    disc[v] = low[v] = timer++;
    for (const auto& ee : g.incident(v)) {
      if (removed[ee.edge] || ee.edge == via) continue;
      const Edge& ed = g.edge(ee.edge);
      int u = ee.end == 0 ? ed.v : ed.u;
      if (disc[u] < 0) {
        dfs(u, ee.edge);
        low[v] = std::min(low[v], low[u]);
        if (low[u] > disc[v]) out.push_back(ee.edge);
      } else {
        low[v] = std::min(low[v], disc[u]);
      }
    }
  };
  for (int v = 0; v < n; ++v)
    if (disc[v] < 0) dfs(v, -1);
  std::sort(out.begin(), out.end());
  return out;
}

bool is_embedded_circle(const Subgraph& s) {
  if (!s.is_union_of_edges()) return false;
  std::vector<int> es = s.full_edges();
  if (es.empty()) return false;
  const MetricGraph& g = s.graph();
  for (int v : s.vertices()) {
    int d = 0;
    for (const auto& ee : g.incident(v))
      if (std::find(es.begin(), es.end(), ee.edge) != es.end()) ++d;
    if (d != 2) return false;
  }
  // connectedness of the edge set
  std::vector<int> seen{es.front()};
  std::vector<bool> in(g.num_edges(), false);
  for (int e : es) in[e] = true;
  std::vector<bool> vis(g.num_edges(), false);
  vis[es.front()] = true;
  for (size_t k = 0; k < seen.size(); ++k) {
    const Edge& ed = g.edge(seen[k]);
    for (int v : {ed.u, ed.v})
      for (const auto& ee : g.incident(v))
        if (in[ee.edge] && !vis[ee.edge]) {
          vis[ee.edge] = true;
          seen.push_back(ee.edge);
        }
  }
  return seen.size() == es.size();
}

LoopSection loop_min_function(GraphPtr g, const Subgraph& loop) {
  if (!is_embedded_circle(loop)) throw std::invalid_argument("target is not an embedded circle");
  const MetricGraph& G = *g;
  std::vector<bool> removed(G.num_edges(), false);
  std::vector<bool> on_loop(G.num_edges(), false);
  for (int e : loop.full_edges()) on_loop[e] = true;
  LoopSection out;
  int betti = G.betti();
  while (betti > 1) {
    std::vector<int> br = bridge_edges(G, removed);
    int pick = -1;
    for (int e = 0; e < G.num_edges(); ++e) {
      if (removed[e] || on_loop[e]) continue;
      if (std::binary_search(br.begin(), br.end(), e)) continue;
      pick = e;
      break;
    }
    if (pick < 0)
      throw std::logic_error("loop_min_function: no puncture candidate with betti " +
                             std::to_string(betti));
    removed[pick] = true;
    out.punctures.push_back({pick, G.edge(pick).len / 2});
    --betti;
  }
  Divisor target = canonical_divisor(G);
  for (const auto& p : out.punctures) target.add(p, -1);
  auto rep = effective_representative(g, target);
  if (!rep) throw std::logic_error("loop_min_function: canonical class lost rank");
  out.psi = plf_shift(rep->psi, -rep->psi.min_value());
  if (!(min_locus(out.psi) == loop))
    throw std::logic_error("loop_min_function: min locus differs from target loop");
  return out;
}

}  // namespace troplin
