#include "troplin/plf.hpp"

#include <algorithm>
#include <stdexcept>

namespace troplin {

namespace {

long integer_slope(const Q& dy, const Q& dx) {
  Q s = dy / dx;
  if (!is_integer(s)) throw std::invalid_argument("invalid function: non-integer slope");
  return to_long(s);
}

void merge_sorted(std::vector<Q>& out, const std::vector<Q>& a, const std::vector<Q>& b) {
  out.clear();
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  out.erase(std::unique(out.begin(), out.end()), out.end());
}

Q eval_fn(const EdgeFn& f, const Q& t) {
  auto it = std::upper_bound(f.x.begin(), f.x.end(), t);
  size_t k = it == f.x.begin() ? 0 : static_cast<size_t>(it - f.x.begin()) - 1;
  if (k >= f.slope.size()) return f.y.back();
  return f.y[k] + Q(f.slope[k]) * (t - f.x[k]);
}

EdgeFn build(const std::vector<Q>& xs, const std::vector<Q>& ys) {
  EdgeFn f;
  f.x = xs;
  f.y = ys;
  return f;
}

}  // namespace

PLFunction make_normalized(GraphPtr g, std::vector<EdgeFn> pieces) {
  if (!g) throw std::invalid_argument("function without graph");
  if (static_cast<int>(pieces.size()) != g->num_edges())
    throw std::invalid_argument("invalid function: wrong number of edges");
  for (int e = 0; e < g->num_edges(); ++e) {
    EdgeFn& f = pieces[e];
    if (f.x.size() < 2 || f.x.size() != f.y.size())
      throw std::invalid_argument("invalid function: malformed breakpoints");
    if (f.x.front() != 0 || f.x.back() != g->edge(e).len)
      throw std::invalid_argument("invalid function: breakpoints must span the edge");
    EdgeFn n;
    n.x.push_back(f.x[0]);
    n.y.push_back(f.y[0]);
    for (size_t k = 1; k < f.x.size(); ++k) {
      Q dx = f.x[k] - f.x[k - 1];
      if (dx <= 0) throw std::invalid_argument("invalid function: breakpoints not increasing");
      long s = integer_slope(f.y[k] - f.y[k - 1], dx);
      if (!n.slope.empty() && n.slope.back() == s) {
        n.x.back() = f.x[k];
        n.y.back() = f.y[k];
      } else {
        n.slope.push_back(s);
        n.x.push_back(f.x[k]);
        n.y.push_back(f.y[k]);
      }
    }
    f = std::move(n);
  }
  std::vector<std::optional<Q>> vval(g->num_vertices());
  for (int e = 0; e < g->num_edges(); ++e) {
    const Edge& ed = g->edge(e);
    const Q* ends[2] = {&pieces[e].y.front(), &pieces[e].y.back()};
    int vs[2] = {ed.u, ed.v};
    for (int i = 0; i < 2; ++i) {
      auto& slot = vval[vs[i]];
      if (!slot) slot = *ends[i];
      else if (*slot != *ends[i])
        throw std::invalid_argument("invalid function: discontinuous at a vertex");
    }
  }
  PLFunction p;
  p.g_ = std::move(g);
  p.f_ = std::move(pieces);
  return p;
}

PLFunction PLFunction::constant(GraphPtr g, const Q& c) {
  std::vector<EdgeFn> pieces;
  for (int e = 0; e < g->num_edges(); ++e) pieces.push_back(build({Q(0), g->edge(e).len}, {c, c}));
  return make_normalized(std::move(g), std::move(pieces));
}

PLFunction PLFunction::from_breakpoints(GraphPtr g, std::vector<EdgeFn> pieces) {
  return make_normalized(std::move(g), std::move(pieces));
}

Q PLFunction::eval_edge(int e, const Q& t) const { return eval_fn(f_.at(e), t); }

Q PLFunction::eval(const GraphPoint& p) const { return eval_edge(p.edge, p.t); }

Q PLFunction::vertex_value(int v) const { return eval(g_->vertex_point(v)); }

long PLFunction::slope_at(int e, const Q& t, int dir) const {
  const EdgeFn& f = f_.at(e);
  if (dir > 0) {
    auto it = std::upper_bound(f.x.begin(), f.x.end(), t);
    size_t k = static_cast<size_t>(it - f.x.begin()) - 1;
    if (k >= f.slope.size()) throw std::out_of_range("no direction beyond the head");
    return f.slope[k];
  }
  auto it = std::lower_bound(f.x.begin(), f.x.end(), t);
  size_t k = static_cast<size_t>(it - f.x.begin());
  if (k == 0) throw std::out_of_range("no direction before the tail");
  return -f.slope[k - 1];
}

Q PLFunction::min_value() const {
  Q m = f_.at(0).y.front();
  for (const auto& f : f_)
    for (const auto& y : f.y)
      if (y < m) m = y;
  return m;
}

Q PLFunction::max_value() const {
  Q m = f_.at(0).y.front();
  for (const auto& f : f_)
    for (const auto& y : f.y)
      if (y > m) m = y;
  return m;
}

bool operator==(const PLFunction& a, const PLFunction& b) {
  if (a.g_ != b.g_ || a.f_.size() != b.f_.size()) return false;
  for (size_t e = 0; e < a.f_.size(); ++e)
    if (a.f_[e].x != b.f_[e].x || a.f_[e].y != b.f_[e].y) return false;
  return true;
}

static void same_graph(const PLFunction& a, const PLFunction& b) {
  if (a.graph_ptr() != b.graph_ptr() &&
      (a.graph_ptr() == nullptr || b.graph_ptr() == nullptr))
    throw std::invalid_argument("mismatched graphs");
  if (a.graph_ptr() != b.graph_ptr()) throw std::invalid_argument("mismatched graphs");
}

PLFunction plf_add(const PLFunction& a, const PLFunction& b) {
  same_graph(a, b);
  std::vector<EdgeFn> out;
  std::vector<Q> xs;
  for (int e = 0; e < a.graph().num_edges(); ++e) {
    merge_sorted(xs, a.on_edge(e).x, b.on_edge(e).x);
    std::vector<Q> ys;
    ys.reserve(xs.size());
    for (const auto& x : xs) ys.push_back(a.eval_edge(e, x) + b.eval_edge(e, x));
    out.push_back(build(xs, ys));
  }
  return make_normalized(a.graph_ptr(), std::move(out));
}

PLFunction plf_scale(const PLFunction& a, long c) {
  std::vector<EdgeFn> out = a.pieces();
  for (auto& f : out)
    for (auto& y : f.y) y *= c;
  return make_normalized(a.graph_ptr(), std::move(out));
}

PLFunction plf_sub(const PLFunction& a, const PLFunction& b) {
  return plf_add(a, plf_scale(b, -1));
}

PLFunction plf_shift(const PLFunction& a, const Q& c) {
  std::vector<EdgeFn> out = a.pieces();
  for (auto& f : out)
    for (auto& y : f.y) y += c;
  return make_normalized(a.graph_ptr(), std::move(out));
}

PLFunction plf_min(const PLFunction& a, const PLFunction& b) {
  same_graph(a, b);
  std::vector<EdgeFn> out;
  std::vector<Q> xs;
  for (int e = 0; e < a.graph().num_edges(); ++e) {
    merge_sorted(xs, a.on_edge(e).x, b.on_edge(e).x);
    std::vector<Q> px, py;
    Q da_prev, db_prev;
    for (size_t k = 0; k < xs.size(); ++k) {
      Q va = a.eval_edge(e, xs[k]);
      Q vb = b.eval_edge(e, xs[k]);
      if (k > 0) {
        Q d0 = da_prev - db_prev;
        Q d1 = va - vb;
        if ((d0 < 0 && d1 > 0) || (d0 > 0 && d1 < 0)) {
          Q t = xs[k - 1] + (xs[k] - xs[k - 1]) * d0 / (d0 - d1);
          px.push_back(t);
          py.push_back(a.eval_edge(e, t));
        }
      }
      px.push_back(xs[k]);
      py.push_back(va < vb ? va : vb);
      da_prev = va;
      db_prev = vb;
    }
    out.push_back(build(px, py));
  }
  return make_normalized(a.graph_ptr(), std::move(out));
}

PLFunction plf_min(const std::vector<PLFunction>& fs, const std::vector<Q>& consts) {
  if (fs.empty()) throw std::invalid_argument("min of empty family");
  if (!consts.empty() && consts.size() != fs.size())
    throw std::invalid_argument("constants do not match family");
  auto term = [&](size_t i) { return consts.empty() ? fs[i] : plf_shift(fs[i], consts[i]); };
  PLFunction acc = term(0);
  for (size_t i = 1; i < fs.size(); ++i) acc = plf_min(acc, term(i));
  return acc;
}

Divisor divisor_of_function(const PLFunction& psi) {
  const MetricGraph& g = psi.graph();
  Divisor d;
  for (int v = 0; v < g.num_vertices(); ++v) {
    long out = 0;
    for (const auto& ee : g.incident(v)) {
      const EdgeFn& f = psi.on_edge(ee.edge);
      out += ee.end == 0 ? f.slope.front() : -f.slope.back();
    }
    if (g.valence(v) > 0) d.add(g.vertex_point(v), -out);
  }
  for (int e = 0; e < g.num_edges(); ++e) {
    const EdgeFn& f = psi.on_edge(e);
    for (size_t k = 1; k + 1 < f.x.size(); ++k) d.add({e, f.x[k]}, f.slope[k - 1] - f.slope[k]);
  }
  return d;
}

Divisor canonical_divisor(const MetricGraph& g) {
  std::vector<long> c(g.num_vertices());
  for (int v = 0; v < g.num_vertices(); ++v) c[v] = g.valence(v) - 2;
  return vertex_divisor(g, c);
}

Subgraph level_set(const PLFunction& psi, const Q& c) {
  const MetricGraph& g = psi.graph();
  Subgraph s(psi.graph_ptr());
  for (int e = 0; e < g.num_edges(); ++e) {
    const EdgeFn& f = psi.on_edge(e);
    for (size_t k = 0; k < f.x.size(); ++k) {
      if (f.y[k] != c) continue;
      if (k + 1 < f.x.size() && f.y[k + 1] == c) s.add_interval(e, f.x[k], f.x[k + 1]);
      else if (k > 0 && k + 1 < f.x.size()) s.add_interval(e, f.x[k], f.x[k]);
    }
  }
  for (int v = 0; v < g.num_vertices(); ++v)
    if (g.valence(v) > 0 && psi.vertex_value(v) == c) s.add_vertex(v);
  return s;
}

Subgraph min_locus(const PLFunction& psi) { return level_set(psi, psi.min_value()); }

std::vector<Q> breakpoints(const PLFunction& psi, int e) { return psi.on_edge(e).x; }

ShapeReport shape_lemma_audit(const Divisor& D, const std::vector<PLFunction>& funcs,
                              const PLFunction& theta) {
  ShapeReport rep;
  Divisor delta = D + divisor_of_function(theta);
  if (!delta.effective()) throw std::invalid_argument("D + div(theta) is not effective");
  for (size_t j = 0; j < funcs.size(); ++j) {
    PLFunction gap = plf_sub(funcs[j], theta);
    if (gap.min_value() < 0) throw std::invalid_argument("theta is not the minimum of the family");
    if (gap.min_value() != 0) continue;
    Subgraph region = min_locus(gap);
    Divisor dj = D + divisor_of_function(funcs[j]);
    if (!dj.effective()) throw std::invalid_argument("D + div(f_j) is not effective");
    std::set<GraphPoint> pts;
    for (const auto& kv : delta.terms()) pts.insert(kv.first);
    for (const auto& kv : dj.terms()) pts.insert(kv.first);
    for (const auto& p : pts) {
      if (!region.contains(p)) continue;
      ShapeEntry en{p, static_cast<int>(j), region.outdeg(p) > 0, delta.at(p), dj.at(p)};
      if (en.boundary || en.delta_mult == en.region_mult) {
        if (en.delta_mult > 0) rep.witnesses.push_back(en);
      } else {
        rep.violations.push_back(en);
      }
    }
  }
  return rep;
}

bool outdegree_bound_holds(const PLFunction& psi, const Divisor& D) {
  Subgraph s = min_locus(psi);
  for (const auto& p : s.boundary())
    if (s.outdeg(p) > D.at(p)) return false;
  return true;
}

}  // namespace troplin
