#include "troplin/graph.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace troplin {

MetricGraph::MetricGraph(int num_vertices, std::vector<Edge> edges)
    : nv_(num_vertices), edges_(std::move(edges)), inc_(num_vertices) {
  if (nv_ < 1) throw std::invalid_argument("graph needs a vertex");
  for (int e = 0; e < num_edges(); ++e) {
    const Edge& ed = edges_[e];
    if (ed.u < 0 || ed.u >= nv_ || ed.v < 0 || ed.v >= nv_)
      throw std::invalid_argument("edge endpoint out of range");
    if (ed.len <= 0) throw std::invalid_argument("edge length must be positive");
    inc_[ed.u].push_back({e, 0});
    inc_[ed.v].push_back({e, 1});
  }
  std::vector<int> parent(nv_);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  int comps = nv_;
  for (const Edge& ed : edges_) {
    int a = find(ed.u), b = find(ed.v);
    if (a != b) {
      parent[a] = b;
      --comps;
    }
  }
  if (comps != 1) throw std::invalid_argument("graph is not connected");
  if (nv_ > 1)
    for (int v = 0; v < nv_; ++v)
      if (inc_[v].empty()) throw std::invalid_argument("isolated vertex");
}

GraphPtr make_graph(int num_vertices, std::vector<Edge> edges) {
  return std::make_shared<const MetricGraph>(num_vertices, std::move(edges));
}

GraphPoint MetricGraph::vertex_point(int v) const {
  const auto& in = inc_.at(v);
  if (in.empty()) throw std::invalid_argument("vertex without edges has no point");
  EdgeEnd best = in.front();
  for (const auto& ee : in)
    if (ee.edge < best.edge || (ee.edge == best.edge && ee.end < best.end)) best = ee;
  return {best.edge, best.end == 0 ? Q(0) : edges_[best.edge].len};
}

GraphPoint MetricGraph::point(int e, const Q& t) const {
  const Edge& ed = edges_.at(e);
  if (t < 0 || t > ed.len) throw std::out_of_range("offset outside edge");
  if (t == 0) return vertex_point(ed.u);
  if (t == ed.len) return vertex_point(ed.v);
  return {e, t};
}

std::optional<int> MetricGraph::vertex_at(const GraphPoint& p) const {
  const Edge& ed = edges_.at(p.edge);
  if (p.t == 0) return ed.u;
  if (p.t == ed.len) return ed.v;
  return std::nullopt;
}

bool MetricGraph::valid_point(const GraphPoint& p) const {
  if (p.edge < 0 || p.edge >= num_edges()) return false;
  if (p.t < 0 || p.t > edges_[p.edge].len) return false;
  return point(p.edge, p.t) == p;
}

void Divisor::add(const GraphPoint& p, long n) {
  if (n == 0) return;
  auto it = m_.find(p);
  if (it == m_.end()) {
    m_.emplace(p, n);
  } else {
    it->second += n;
    if (it->second == 0) m_.erase(it);
  }
}

long Divisor::at(const GraphPoint& p) const {
  auto it = m_.find(p);
  return it == m_.end() ? 0 : it->second;
}

long Divisor::degree() const {
  long d = 0;
  for (const auto& kv : m_) d += kv.second;
  return d;
}

bool Divisor::effective() const {
  return std::all_of(m_.begin(), m_.end(), [](const auto& kv) { return kv.second > 0; });
}

Divisor Divisor::operator+(const Divisor& o) const {
  Divisor r = *this;
  for (const auto& [p, n] : o.m_) r.add(p, n);
  return r;
}

Divisor Divisor::operator-(const Divisor& o) const {
  Divisor r = *this;
  for (const auto& [p, n] : o.m_) r.add(p, -n);
  return r;
}

Divisor Divisor::scaled(long c) const {
  Divisor r;
  if (c == 0) return r;
  for (const auto& [p, n] : m_) r.m_.emplace(p, n * c);
  return r;
}

Divisor vertex_divisor(const MetricGraph& g, const std::vector<long>& coeffs) {
  Divisor d;
  for (int v = 0; v < g.num_vertices(); ++v) d.add(g.vertex_point(v), coeffs.at(v));
  return d;
}

Subgraph::Subgraph(GraphPtr g) : g_(std::move(g)), iv_(g_->num_edges()) {}

Subgraph Subgraph::from_edges(GraphPtr g, const std::vector<int>& edges) {
  Subgraph s(g);
  for (int e : edges) s.add_interval(e, 0, g->edge(e).len);
  return s;
}

void Subgraph::add_interval(int e, const Q& a, const Q& b) {
  const Edge& ed = g_->edge(e);
  if (a > b || a < 0 || b > ed.len) throw std::invalid_argument("bad interval");
  auto& v = iv_[e];
  v.push_back({a, b});
  std::sort(v.begin(), v.end(), [](const Interval& x, const Interval& y) { return x.a < y.a; });
  std::vector<Interval> merged;
  for (const auto& in : v) {
    if (!merged.empty() && in.a <= merged.back().b) {
      if (in.b > merged.back().b) merged.back().b = in.b;
    } else {
      merged.push_back(in);
    }
  }
  v = std::move(merged);
  if (a == 0) vs_.insert(ed.u);
  if (b == ed.len) vs_.insert(ed.v);
}

void Subgraph::add_vertex(int v) {
  vs_.insert(v);
}

bool Subgraph::contains(const GraphPoint& p) const {
  if (auto v = g_->vertex_at(p)) return vs_.count(*v) > 0;
  for (const auto& in : iv_.at(p.edge))
    if (in.a <= p.t && p.t <= in.b) return true;
  return false;
}

bool Subgraph::empty() const {
  if (!vs_.empty()) return false;
  for (const auto& v : iv_)
    if (!v.empty()) return false;
  return true;
}

// dir = +1 looks toward the head, -1 toward the tail.
bool Subgraph::dir_inside(int e, const Q& t, int dir) const {
  for (const auto& in : iv_[e]) {
    if (dir > 0 && in.a <= t && t < in.b) return true;
    if (dir < 0 && in.a < t && t <= in.b) return true;
  }
  return false;
}

int Subgraph::indeg(const GraphPoint& p) const {
  if (!contains(p)) return 0;
  int n = 0;
  if (auto v = g_->vertex_at(p)) {
    for (const auto& ee : g_->incident(*v)) {
      if (ee.end == 0 ? dir_inside(ee.edge, 0, +1)
                      : dir_inside(ee.edge, g_->edge(ee.edge).len, -1))
        ++n;
    }
    return n;
  }
  if (dir_inside(p.edge, p.t, +1)) ++n;
  if (dir_inside(p.edge, p.t, -1)) ++n;
  return n;
}

int Subgraph::outdeg(const GraphPoint& p) const {
  if (!contains(p)) return 0;
  int total = g_->vertex_at(p) ? g_->valence(*g_->vertex_at(p)) : 2;
  return total - indeg(p);
}

std::vector<GraphPoint> Subgraph::special_points() const {
  std::vector<GraphPoint> pts;
  for (int v : vs_) pts.push_back(g_->vertex_point(v));
  for (int e = 0; e < g_->num_edges(); ++e) {
    const Q& len = g_->edge(e).len;
    for (const auto& in : iv_[e]) {
      if (in.a > 0 && in.a < len) pts.push_back({e, in.a});
      if (in.b > 0 && in.b < len && in.b != in.a) pts.push_back({e, in.b});
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

std::vector<GraphPoint> Subgraph::boundary() const {
  std::vector<GraphPoint> out;
  for (const auto& p : special_points())
    if (outdeg(p) > 0) out.push_back(p);
  return out;
}

std::vector<GraphPoint> Subgraph::leaves() const {
  std::vector<GraphPoint> out;
  for (const auto& p : special_points())
    if (indeg(p) == 1) out.push_back(p);
  return out;
}

bool Subgraph::is_union_of_edges() const {
  for (int e = 0; e < g_->num_edges(); ++e) {
    const auto& v = iv_[e];
    if (v.empty()) continue;
    if (v.size() != 1 || v[0].a != 0 || v[0].b != g_->edge(e).len) return false;
  }
  for (int v : vs_) {
    bool covered = false;
    for (const auto& ee : g_->incident(v))
      if (!iv_[ee.edge].empty()) covered = true;
    if (!covered) return false;
  }
  return true;
}

std::vector<int> Subgraph::full_edges() const {
  std::vector<int> out;
  for (int e = 0; e < g_->num_edges(); ++e) {
    const auto& v = iv_[e];
    if (v.size() == 1 && v[0].a == 0 && v[0].b == g_->edge(e).len) out.push_back(e);
  }
  return out;
}

}  // namespace troplin
