// Shared fixtures for the test suites.

#ifndef TROPLIN_TEST_HELPERS_HPP
#define TROPLIN_TEST_HELPERS_HPP

#include <random>
#include <vector>

#include "troplin/chain.hpp"
#include "troplin/plf.hpp"
#include "troplin/reduced.hpp"
#include "troplin/zoo.hpp"

namespace testkit {

using namespace troplin;

inline GraphPtr random_graph(std::mt19937& rng, int max_vertices = 5, int max_extra = 4,
                             int max_len = 4) {
  std::uniform_int_distribution<int> nvd(1, max_vertices);
  int nv = nvd(rng);
  std::uniform_int_distribution<int> lend(1, max_len);
  std::vector<Edge> es;
  for (int v = 1; v < nv; ++v) {
    std::uniform_int_distribution<int> pd(0, v - 1);
    es.push_back({pd(rng), v, Q(lend(rng))});
  }
  std::uniform_int_distribution<int> xd(nv == 1 ? 1 : 0, max_extra);
  int extra = xd(rng);
  std::uniform_int_distribution<int> vd(0, nv - 1);
  for (int i = 0; i < extra; ++i) es.push_back({vd(rng), vd(rng), Q(lend(rng))});
  return make_graph(nv, std::move(es));
}

// Random function with integer slopes: arbitrary pieces on the first half of
// each edge, then a concave two-piece fix reaching the head value.
inline PLFunction random_function(std::mt19937& rng, const GraphPtr& g, int denom = 2) {
  std::uniform_int_distribution<int> vald(-6, 6);
  std::uniform_int_distribution<int> sd(-3, 3);
  std::uniform_int_distribution<int> kd(0, 3);
  std::vector<Q> vv(g->num_vertices());
  for (auto& v : vv) v = qq(vald(rng), denom);
  std::vector<EdgeFn> pieces(g->num_edges());
  for (int e = 0; e < g->num_edges(); ++e) {
    const Edge& ed = g->edge(e);
    Q half = ed.len / 2;
    int k = kd(rng);
    EdgeFn& f = pieces[e];
    f.x.push_back(0);
    f.y.push_back(vv[ed.u]);
    Q step = half / (k + 1);
    for (int i = 0; i < k + 1; ++i) {
      Q x = f.x.back() + step;
      f.y.push_back(f.y.back() + Q(sd(rng)) * step);
      f.x.push_back(x);
    }
    Q R = ed.len - half;
    Q H = vv[ed.v] - f.y.back();
    Q s = H / R;
    if (is_integer(s)) {
      f.x.push_back(ed.len);
      f.y.push_back(vv[ed.v]);
    } else {
      Z a = floor_q(s);
      Q x = Q(a + 1) * R - H;  // length of the slope-a piece at the end
      Q split = ed.len - x;
      f.y.push_back(f.y.back() + Q(a + 1) * (split - f.x.back()));
      f.x.push_back(split);
      f.x.push_back(ed.len);
      f.y.push_back(vv[ed.v]);
    }
  }
  return PLFunction::from_breakpoints(g, std::move(pieces));
}

// Random divisor supported on points with offsets in (1/denom) Z.
inline Divisor random_divisor(std::mt19937& rng, const GraphPtr& g, int chips, int lo, int hi,
                              int denom = 1) {
  Divisor D;
  std::uniform_int_distribution<int> ed(0, g->num_edges() - 1);
  std::uniform_int_distribution<int> md(lo, hi);
  for (int i = 0; i < chips; ++i) {
    int e = ed(rng);
    Q len = g->edge(e).len;
    long steps = to_long(Q(len * denom));
    std::uniform_int_distribution<long> td(0, steps);
    D.add(g->point(e, qq(td(rng), denom)), md(rng));
  }
  return D;
}

// Lattice subdivision of an integer-length graph with spacing 1/denom.
struct Lattice {
  int n = 0;
  std::map<GraphPoint, int> id;
  std::vector<std::vector<int>> adj;
};

inline Lattice lattice_of(const MetricGraph& g, int denom = 1) {
  Lattice L;
  auto node = [&](const GraphPoint& p) {
    auto [it, fresh] = L.id.emplace(p, L.n);
    if (fresh) {
      ++L.n;
      L.adj.emplace_back();
    }
    return it->second;
  };
  for (int e = 0; e < g.num_edges(); ++e) {
    long steps = to_long(Q(g.edge(e).len * denom));
    int prev = node(g.point(e, 0));
    for (long k = 1; k <= steps; ++k) {
      int cur = node(g.point(e, qq(k, denom)));
      L.adj[prev].push_back(cur);
      L.adj[cur].push_back(prev);
      prev = cur;
    }
  }
  return L;
}

// Finite-graph burning test on the lattice.
inline bool lattice_reduced(const Lattice& L, const std::vector<long>& D, int q) {
  for (int v = 0; v < L.n; ++v)
    if (v != q && D[v] < 0) return false;
  std::vector<bool> burnt(L.n, false);
  std::vector<int> hits(L.n, 0);
  std::vector<int> stack{q};
  burnt[q] = true;
  int count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int u : L.adj[v]) {
      if (burnt[u]) continue;
      if (++hits[u] > D[u]) {
        burnt[u] = true;
        ++count;
        stack.push_back(u);
      }
    }
  }
  return count == L.n;
}

// Whether D2 - D1 lies in the lattice Laplacian image (integer potential).
inline bool lattice_equivalent(const Lattice& L, const std::vector<long>& D1,
                               const std::vector<long>& D2) {
  const int n = L.n;
  long tot = 0;
  for (int v = 0; v < n; ++v) tot += D2[v] - D1[v];
  if (tot != 0) return false;
  if (n == 1) return true;
  std::vector<std::vector<Q>> A(n - 1, std::vector<Q>(n - 1));
  std::vector<Q> b(n - 1);
  for (int v = 1; v < n; ++v) {
    b[v - 1] = Q(D2[v] - D1[v]);
    for (int u : L.adj[v]) {
      if (u == v) continue;
      A[v - 1][v - 1] += 1;
      if (u != 0) A[v - 1][u - 1] -= 1;
    }
  }
  const int m = n - 1;
  for (int c = 0; c < m; ++c) {
    int p = c;
    while (p < m && A[p][c] == 0) ++p;
    if (p == m) return false;
    std::swap(A[p], A[c]);
    std::swap(b[p], b[c]);
    for (int r = 0; r < m; ++r) {
      if (r == c || A[r][c] == 0) continue;
      Q f = A[r][c] / A[c][c];
      for (int k = c; k < m; ++k) A[r][k] -= f * A[c][k];
      b[r] -= f * b[c];
    }
  }
  for (int i = 0; i < m; ++i)
    if (!is_integer(b[i] / A[i][i])) return false;
  return true;
}

inline std::vector<long> on_lattice(const Lattice& L, const Divisor& D) {
  std::vector<long> v(L.n, 0);
  for (const auto& [p, c] : D.terms()) v.at(L.id.at(p)) += c;
  return v;
}

// Admissible chain with random rational lengths. Bottom lengths are powers of
// B = 2g + 3 moved by less than 1 / (2g(g + 1)), so no relation with
// coefficients up to g + 1 can vanish.
inline ChainParams random_chain(std::mt19937& rng, int g, long mbar) {
  std::uniform_int_distribution<int> nd(1, 400), dd(1, 3), ud(-999, 999);
  ChainParams p;
  p.g = g;
  p.mbar = mbar;
  p.ell.assign(g + 1, Q(0));
  p.m.assign(g + 1, Q(0));
  p.n.assign(g + 1, Q(0));
  Q mmax = 0, lmax = 0;
  Z power = 1;
  for (int k = 1; k <= g; ++k) {
    p.m[k] = Q(power) + qq(ud(rng), 2000L * g * (g + 1));
    power *= 2 * g + 3;
    if (p.m[k] > mmax) mmax = p.m[k];
  }
  for (int k = 1; k <= g; ++k) {
    p.ell[k] = Q(4 * g) * mmax + qq(nd(rng), dd(rng));
    if (p.ell[k] > lmax) lmax = p.ell[k];
  }
  for (int k = 0; k <= g; ++k) p.n[k] = Q(2 * mbar) * lmax + qq(nd(rng), dd(rng));
  return p;
}

// Uniformly random linear extension of the (r + 1) x s rectangle.
inline Tableau random_rectangle(std::mt19937& rng, int r, int s) {
  std::vector<int> filled(r + 1, 0);
  Tableau t;
  t.r = r;
  t.s = s;
  t.rows.assign(s, std::vector<int>(r + 1));
  for (int v = 1; v <= (r + 1) * s; ++v) {
    std::vector<int> ok;
    for (int col = 0; col <= r; ++col)
      if (filled[col] < s && (col == 0 || filled[col - 1] > filled[col])) ok.push_back(col);
    int col = ok[std::uniform_int_distribution<size_t>(0, ok.size() - 1)(rng)];
    t.rows[filled[col]++][col] = v;
  }
  return t;
}

inline std::vector<Subgraph> embedded_circles(const GraphPtr& g) {
  std::vector<Subgraph> out;
  int E = g->num_edges();
  for (int mask = 1; mask < (1 << E); ++mask) {
    std::vector<int> es;
    for (int e = 0; e < E; ++e)
      if (mask >> e & 1) es.push_back(e);
    Subgraph s = Subgraph::from_edges(g, es);
    if (is_embedded_circle(s)) out.push_back(s);
  }
  return out;
}

}  // namespace testkit

#endif
