// Metric graphs, points, divisors and closed subgraphs.

#ifndef TROPLIN_GRAPH_HPP
#define TROPLIN_GRAPH_HPP

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "troplin/rational.hpp"

namespace troplin {

struct Edge {
  int u = 0;
  int v = 0;
  Q len;
};

// A point of a metric graph: an edge and an offset measured from the tail.
// Vertices are always stored on their lowest incident edge.
struct GraphPoint {
  int edge = 0;
  Q t;

  friend bool operator==(const GraphPoint& a, const GraphPoint& b) {
    return a.edge == b.edge && a.t == b.t;
  }
  friend bool operator<(const GraphPoint& a, const GraphPoint& b) {
    if (a.edge != b.edge) return a.edge < b.edge;
    return a.t < b.t;
  }
};

// One end of an edge as seen from a vertex. end == 0 is the tail.
struct EdgeEnd {
  int edge;
  int end;
};

class MetricGraph {
 public:
  MetricGraph(int num_vertices, std::vector<Edge> edges);

  int num_vertices() const { return nv_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const Edge& edge(int e) const { return edges_.at(e); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<EdgeEnd>& incident(int v) const { return inc_.at(v); }
  int valence(int v) const { return static_cast<int>(inc_.at(v).size()); }
  int betti() const { return num_edges() - nv_ + 1; }
  int endpoint(const EdgeEnd& ee) const {
    return ee.end == 0 ? edges_[ee.edge].u : edges_[ee.edge].v;
  }

  GraphPoint vertex_point(int v) const;
  GraphPoint point(int e, const Q& t) const;  // canonicalized
  std::optional<int> vertex_at(const GraphPoint& p) const;
  bool valid_point(const GraphPoint& p) const;

  // Optional external labels, used only by serialization.
  std::vector<long> vertex_labels;
  std::vector<long> edge_labels;

 private:
  int nv_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeEnd>> inc_;
};

using GraphPtr = std::shared_ptr<const MetricGraph>;

GraphPtr make_graph(int num_vertices, std::vector<Edge> edges);

class Divisor {
 public:
  Divisor() = default;

  void add(const GraphPoint& p, long n);
  long at(const GraphPoint& p) const;
  long degree() const;
  bool effective() const;
  const std::map<GraphPoint, long>& terms() const { return m_; }
  bool empty() const { return m_.empty(); }

  Divisor operator+(const Divisor& o) const;
  Divisor operator-(const Divisor& o) const;
  Divisor scaled(long c) const;

  template <class Pred>
  Divisor restricted(Pred keep) const {
    Divisor r;
    for (const auto& [p, n] : m_)
      if (keep(p)) r.m_.emplace(p, n);
    return r;
  }

  friend bool operator==(const Divisor& a, const Divisor& b) { return a.m_ == b.m_; }

 private:
  std::map<GraphPoint, long> m_;
};

Divisor vertex_divisor(const MetricGraph& g, const std::vector<long>& coeffs);

struct Interval {
  Q a;
  Q b;
  friend bool operator==(const Interval& x, const Interval& y) {
    return x.a == y.a && x.b == y.b;
  }
};

// Closed subset of a metric graph: sorted disjoint closed intervals per edge,
// plus the set of vertices it contains.
class Subgraph {
 public:
  explicit Subgraph(GraphPtr g);

  static Subgraph from_edges(GraphPtr g, const std::vector<int>& edges);

  void add_interval(int e, const Q& a, const Q& b);
  void add_vertex(int v);

  const MetricGraph& graph() const { return *g_; }
  const std::vector<Interval>& intervals(int e) const { return iv_.at(e); }
  const std::set<int>& vertices() const { return vs_; }

  bool contains(const GraphPoint& p) const;
  bool empty() const;
  // Number of tangent directions at p that leave the subgraph.
  int outdeg(const GraphPoint& p) const;
  // Number of tangent directions at p that stay inside.
  int indeg(const GraphPoint& p) const;
  std::vector<GraphPoint> boundary() const;
  std::vector<GraphPoint> leaves() const;
  bool is_union_of_edges() const;
  std::vector<int> full_edges() const;

  friend bool operator==(const Subgraph& a, const Subgraph& b) {
    return a.iv_ == b.iv_ && a.vs_ == b.vs_;
  }

 private:
  bool dir_inside(int e, const Q& t, int dir) const;
  std::vector<GraphPoint> special_points() const;

  GraphPtr g_;
  std::vector<std::vector<Interval>> iv_;
  std::set<int> vs_;
};

}  // namespace troplin

#endif
