#include "troplin/independence.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <stdexcept>
#include <tuple>

namespace troplin {

namespace {

struct Winners {
  Q value;
  std::vector<int> idx;
};

Winners minimizers(const std::vector<PLFunction>& funcs, const Combination& b, int e,
                   const Q& t) {
  Winners w;
  for (int i = 0; i < static_cast<int>(funcs.size()); ++i) {
    Q v = funcs[i].eval_edge(e, t) + b[i];
    if (w.idx.empty() || v < w.value) {
      w.value = v;
      w.idx.assign(1, i);
    } else if (v == w.value) {
      w.idx.push_back(i);
    }
  }
  return w;
}

// Linear constraint system over b with difference equalities kept in a
// weighted union-find (b_x = b_root + off_x).
class System {
 public:
  explicit System(int n) : parent_(n), off_(n) {
    for (int i = 0; i < n; ++i) parent_[i] = i;
  }

  int find(int x) const {
    while (parent_[x] != x) x = parent_[x];
    return x;
  }
  Q offset(int x) const {
    Q o;
    while (parent_[x] != x) {
      o += off_[x];
      x = parent_[x];
    }
    return o;
  }

  // Does b_v - b_u = d agree with the current equalities?
  bool tie_consistent(int u, int v, const Q& d) const {
    if (find(u) != find(v)) return true;
    return offset(v) - offset(u) == d;
  }

  bool add(const LinCon& c) {
    if (c.eq && c.coef.size() == 2 && c.coef[0].second == -c.coef[1].second &&
        abs(c.coef[0].second) == 1) {
      // s (b_x - b_y) = rhs with s = +-1
      int x = c.coef[0].first, y = c.coef[1].first;
      Q d = c.rhs * c.coef[0].second;  // b_x - b_y = d
      return unite(y, x, d);
    }
    rows_.push_back(c);
    return true;
  }

  std::optional<Combination> solve() const {
    const int n = static_cast<int>(parent_.size());
    std::vector<int> root(n), id(n, -1);
    std::vector<Q> off(n);
    int nr = 0;
    for (int i = 0; i < n; ++i) {
      root[i] = find(i);
      off[i] = offset(i);
      if (id[root[i]] < 0) id[root[i]] = nr++;
    }
    // Normalized rows: coefficient vector with leading +-1 -> strongest rhs.
    std::map<std::vector<std::pair<int, Q>>, std::pair<Q, bool>> rows;
    for (const auto& c : rows_) {
      std::map<int, Q> acc;
      Q rhs = c.rhs;
      for (const auto& [j, a] : c.coef) {
        acc[id[root[j]]] += a;
        rhs -= a * off[j];
      }
      std::vector<std::pair<int, Q>> v;
      for (auto& [j, a] : acc)
        if (sgn(a) != 0) v.emplace_back(j, a);
      if (v.empty()) {
        if (c.eq ? sgn(rhs) != 0 : sgn(rhs) > 0) return std::nullopt;
        continue;
      }
      Q scale = abs(v[0].second);
      for (auto& [j, a] : v) a /= scale;
      rhs /= scale;
      auto it = rows.find(v);
      if (it == rows.end()) {
        rows.emplace(v, std::make_pair(rhs, c.eq));
      } else if (c.eq || it->second.second) {
        if (c.eq && it->second.second && it->second.first != rhs) return std::nullopt;
        if (c.eq && !it->second.second && rhs < it->second.first) return std::nullopt;
        if (!c.eq && it->second.second && it->second.first < rhs) return std::nullopt;
        if (c.eq) it->second = {rhs, true};
      } else if (it->second.first < rhs) {
        it->second.first = rhs;
      }
    }
    // Bellman-Ford on the difference rows; y_u - y_v >= k gives y_v <= y_u - k.
    struct Arc {
      int u, v;
      Q w;
    };
    std::vector<Arc> arcs;
    std::vector<LinCon> general;
    for (const auto& [v, rc] : rows) {
      const auto& [rhs, eq] = rc;
      if (!eq && v.size() == 2 && v[0].second == -v[1].second) {
        int u = v[0].first, w = v[1].first;
        if (v[0].second < 0) std::swap(u, w);
        arcs.push_back({u, w, -rhs});
      } else {
        LinCon c;
        c.coef = v;
        c.rhs = rhs;
        c.eq = eq;
        general.push_back(std::move(c));
      }
    }
    std::vector<Q> dist(nr);
    bool changed = true;
    for (int it = 0; it <= nr && changed; ++it) {
      changed = false;
      for (const auto& a : arcs)
        if (dist[a.u] + a.w < dist[a.v]) {
          dist[a.v] = dist[a.u] + a.w;
          changed = true;
        }
    }
    if (changed) return std::nullopt;
    std::vector<Q> y = dist;
    if (!general.empty()) {
      for (const auto& a : arcs) {
        LinCon c;
        c.coef = {{a.u, Q(1)}, {a.v, Q(-1)}};
        c.rhs = -a.w;
        general.push_back(std::move(c));
      }
      auto sol = lp_feasible(nr, general);
      if (!sol) return std::nullopt;
      y = *sol;
    }
    Combination b(n);
    for (int i = 0; i < n; ++i) b[i] = y[id[root[i]]] + off[i];
    return b;
  }

 private:
  // Impose b_v - b_u = d.
  bool unite(int u, int v, const Q& d) {
    int ru = find(u), rv = find(v);
    Q ou = offset(u), ov = offset(v);
    if (ru == rv) return ov - ou == d;
    // b_v = b_rv + ov, b_u = b_ru + ou; b_rv = b_ru + ou + d - ov
    parent_[rv] = ru;
    off_[rv] = ou + d - ov;
    return true;
  }

  std::vector<int> parent_;
  std::vector<Q> off_;
  std::vector<LinCon> rows_;
};

// Affine expression in b.
struct Aff {
  std::map<int, Q> coef;
  Q c;
  Aff& operator+=(const Aff& o) {
    for (const auto& [j, a] : o.coef) coef[j] += a;
    c += o.c;
    return *this;
  }
  Aff operator*(const Q& k) const {
    Aff r;
    for (const auto& [j, a] : coef) r.coef[j] = a * k;
    r.c = c * k;
    return r;
  }
  Aff operator-(const Aff& o) const {
    Aff r = *this;
    r += o * Q(-1);
    return r;
  }
  Aff operator+(const Aff& o) const {
    Aff r = *this;
    r += o;
    return r;
  }
};

LinCon as_con(const Aff& a, bool eq) {
  LinCon c;
  for (const auto& [j, k] : a.coef)
    if (sgn(k) != 0) c.coef.emplace_back(j, k);
  c.rhs = -a.c;
  c.eq = eq;
  return c;
}

struct BudgetExceeded {};

}  // namespace

TwiceReport verify_twice(const std::vector<PLFunction>& funcs, const Combination& b) {
  if (funcs.empty()) throw std::invalid_argument("verify_twice: empty family");
  if (b.size() != funcs.size()) throw std::invalid_argument("verify_twice: size mismatch");
  const GraphPtr& gp = funcs[0].graph_ptr();
  for (const auto& f : funcs)
    if (f.graph_ptr() != gp) throw std::invalid_argument("verify_twice: functions on different graphs");
  const int F = static_cast<int>(funcs.size());
  TwiceReport rep;
  for (const auto& c : common_cells(funcs)) {
    const Q lam = c.x1 - c.x0;
    std::vector<Q> pts{Q(0), lam};
    for (int i = 0; i < F; ++i)
      for (int j = i + 1; j < F; ++j) {
        if (c.slope[i] == c.slope[j]) continue;
        Q t = (c.value[j] + b[j] - c.value[i] - b[i]) / Q(c.slope[i] - c.slope[j]);
        if (t > 0 && t < lam) pts.push_back(t);
      }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    std::vector<Q> probes;
    for (size_t k = 0; k < pts.size(); ++k) {
      probes.push_back(pts[k]);
      if (k + 1 < pts.size()) probes.push_back((pts[k] + pts[k + 1]) / 2);
    }
    for (const auto& t : probes) {
      Q x = c.x0 + t;
      auto w = minimizers(funcs, b, c.edge, x);
      if (w.idx.size() < 2) {
        rep.holds = false;
        rep.failing = gp->point(c.edge, x);
        rep.winners = w.idx;
        return rep;
      }
    }
  }
  return rep;
}

ThetaAnalysis theta_analysis(const Chain& c, const std::vector<PLFunction>& funcs,
                             const Combination& b, const Divisor& D, long m) {
  if (funcs.empty() || b.size() != funcs.size())
    throw std::invalid_argument("theta_analysis: bad family");
  Divisor mD = D.scaled(m);
  for (const auto& f : funcs)
    if (!(mD + divisor_of_function(f)).effective())
      throw std::invalid_argument("theta_analysis: m D + div(psi) not effective");
  ThetaAnalysis t;
  t.theta = plf_min(funcs, b);
  t.Delta = mD + divisor_of_function(t.theta);
  const int g = c.genus();
  t.delta.assign(g + 2, 0);
  for (const auto& [p, n] : t.Delta.terms()) t.delta[c.piece_of(p)] += n;
  long run = 0;
  t.e.assign(g + 2, 0);
  for (int k = 0; k <= g + 1; ++k) {
    run += t.delta[k];
    t.e[k] = run - 2L * k;
  }
  return t;
}

std::vector<Cell> common_cells(const std::vector<PLFunction>& funcs) {
  if (funcs.empty()) return {};
  const MetricGraph& G = funcs[0].graph();
  const int F = static_cast<int>(funcs.size());
  std::vector<Cell> out;
  for (int e = 0; e < G.num_edges(); ++e) {
    std::vector<Q> xs;
    for (const auto& f : funcs)
      for (const auto& x : f.on_edge(e).x) xs.push_back(x);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    for (size_t k = 0; k + 1 < xs.size(); ++k) {
      Cell c;
      c.edge = e;
      c.x0 = xs[k];
      c.x1 = xs[k + 1];
      const Q mid = (c.x0 + c.x1) / 2;
      for (int i = 0; i < F; ++i) {
        c.value.push_back(funcs[i].eval_edge(e, c.x0));
        c.slope.push_back(funcs[i].slope_at(e, mid, +1));
      }
      out.push_back(std::move(c));
    }
  }
  return out;
}

std::vector<Cell> distinct_cells(const std::vector<Cell>& cells) {
  std::map<std::tuple<Q, std::vector<long>, std::vector<Q>>, int> seen;
  std::vector<Cell> out;
  for (const auto& c : cells) {
    std::vector<Q> rel;
    for (const auto& v : c.value) rel.push_back(v - c.value[0]);
    auto key = std::make_tuple(Q(c.x1 - c.x0), c.slope, rel);
    if (seen.emplace(key, static_cast<int>(out.size())).second) out.push_back(c);
  }
  return out;
}

std::vector<Pattern> cell_patterns(const Cell& c) {
  std::map<long, std::vector<int>, std::greater<long>> cls;
  for (int i = 0; i < static_cast<int>(c.slope.size()); ++i) cls[c.slope[i]].push_back(i);
  std::vector<std::pair<long, std::vector<int>>> groups;
  for (auto& [s, v] : cls)
    if (v.size() >= 2) groups.emplace_back(s, v);
  std::vector<Pattern> out;
  Pattern cur;
  std::function<void(size_t)> rec = [&](size_t k) {
    if (k == groups.size()) {
      if (!cur.empty()) out.push_back(cur);
      return;
    }
    const auto& [s, v] = groups[k];
    for (size_t x = 0; x < v.size(); ++x)
      for (size_t y = x + 1; y < v.size(); ++y) {
        cur.push_back({s, v[x], v[y]});
        rec(k + 1);
        cur.pop_back();
      }
    rec(k + 1);
  };
  rec(0);
  return out;
}

std::vector<LinCon> pattern_constraints(const Cell& c, const Pattern& p) {
  const int F = static_cast<int>(c.slope.size());
  const Q lam = c.x1 - c.x0;
  auto A = [&](int f) {
    Aff a;
    a.coef[f] = 1;
    a.c = c.value[f];
    return a;
  };
  std::vector<LinCon> out;
  const int P = static_cast<int>(p.size());
  for (const auto& pc : p) out.push_back(as_con(A(pc.b) - A(pc.a), true));
  std::vector<Aff> N;
  std::vector<Q> Dl;
  for (int j = 0; j + 1 < P; ++j) {
    N.push_back(A(p[j + 1].a) - A(p[j].a));
    Dl.push_back(Q(p[j].slope - p[j + 1].slope));
  }
  if (P >= 2) {
    out.push_back(as_con(N[0], false));
    Aff last = N[P - 2] * Q(-1);
    last.c += lam * Dl[P - 2];
    out.push_back(as_con(last, false));
    for (int j = 0; j + 2 < P; ++j)
      out.push_back(as_con(N[j + 1] * Dl[j] - N[j] * Dl[j + 1], false));
  }
  for (int f = 0; f < F; ++f) {
    if (f != p[0].a) out.push_back(as_con(A(f) - A(p[0].a), false));
    if (f != p[P - 1].a) {
      Aff r = A(f) - A(p[P - 1].a);
      r.c += Q(c.slope[f] - p[P - 1].slope) * lam;
      out.push_back(as_con(r, false));
    }
    for (int j = 0; j + 1 < P; ++j) {
      if (f == p[j].a) continue;
      out.push_back(as_con((A(f) - A(p[j].a)) * Dl[j] + N[j] * Q(c.slope[f] - p[j].slope), false));
    }
  }
  return out;
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Dependent: return "dependent";
    case Verdict::Independent: return "independent";
    case Verdict::Undecided: return "undecided";
  }
  return "?";
}

long default_budget() {
  if (const char* s = std::getenv("TROPLIN_BUDGET")) {
    try {
      long v = std::stol(s);
      if (v > 0) return v;
    } catch (const std::exception&) {
    }
  }
  return 1000000;
}

namespace {

struct Tie {
  int a, b;
  Q d;  // b_b - b_a = d
};

class Searcher {
 public:
  Searcher(const std::vector<PLFunction>& funcs, long budget) : F_(funcs.size()), budget_(budget) {
    auto all = common_cells(funcs);
    trace.cells = static_cast<long>(all.size());
    cells_ = distinct_cells(all);
    trace.distinct = static_cast<long>(cells_.size());
    for (const auto& c : cells_) {
      auto ps = cell_patterns(c);
      std::vector<std::vector<LinCon>> cons;
      std::vector<std::vector<Tie>> ties;
      for (const auto& p : ps) {
        cons.push_back(pattern_constraints(c, p));
        std::vector<Tie> t;
        for (const auto& pc : p) t.push_back({pc.a, pc.b, c.value[pc.a] - c.value[pc.b]});
        ties.push_back(std::move(t));
      }
      cons_.push_back(std::move(cons));
      ties_.push_back(std::move(ties));
    }
  }

  DependenceTrace trace;
  std::optional<Combination> found;

  void run() {
    System s(F_);
    std::vector<char> assigned(cells_.size(), 0);
    dfs(s, assigned, 0);
  }

 private:
  static constexpr int kFound = -2;

  int dfs(const System& s, std::vector<char>& assigned, size_t nassigned) {
    if (nassigned == cells_.size()) {
      found = s.solve();
      if (!found) throw std::logic_error("decide_dependence: leaf lost feasibility");
      return kFound;
    }
    int best = -1;
    size_t best_count = 0;
    for (size_t c = 0; c < cells_.size(); ++c) {
      if (assigned[c]) continue;
      size_t cnt = 0;
      for (const auto& t : ties_[c])
        if (consistent(s, t)) ++cnt;
      if (best < 0 || cnt < best_count) {
        best = static_cast<int>(c);
        best_count = cnt;
        if (cnt == 0) break;
      }
    }
    const int node = static_cast<int>(trace.nodes.size());
    trace.nodes.push_back({best, {}});
    for (size_t p = 0; p < cons_[best].size(); ++p) {
      if (!consistent(s, ties_[best][p])) {
        trace.nodes[node].branches.push_back({static_cast<int>(p), -1});
        continue;
      }
      if (++trace.feasibility_calls > budget_) throw BudgetExceeded{};
      System t = s;
      bool ok = true;
      for (const auto& c : cons_[best][p])
        if (!t.add(c)) {
          ok = false;
          break;
        }
      if (ok) ok = t.solve().has_value();
      if (!ok) {
        trace.nodes[node].branches.push_back({static_cast<int>(p), -1});
        continue;
      }
      assigned[best] = 1;
      int r = dfs(t, assigned, nassigned + 1);
      assigned[best] = 0;
      if (r == kFound) return kFound;
      trace.nodes[node].branches.push_back({static_cast<int>(p), r});
    }
    return node;
  }

  static bool consistent(const System& s, const std::vector<Tie>& ts) {
    for (const auto& t : ts)
      if (!s.tie_consistent(t.a, t.b, t.d)) return false;
    return true;
  }

  int F_;
  long budget_;
  std::vector<Cell> cells_;
  std::vector<std::vector<std::vector<LinCon>>> cons_;
  std::vector<std::vector<std::vector<Tie>>> ties_;
};

}  // namespace

DependenceOutcome decide_dependence(const std::vector<PLFunction>& funcs, long budget) {
  if (funcs.empty()) throw std::invalid_argument("decide_dependence: empty family");
  DependenceOutcome out;
  const long ncells = static_cast<long>(common_cells(funcs).size());
  if (ncells * static_cast<long>(funcs.size()) > budget) {
    out.trace.cells = ncells;
    return out;
  }
  Searcher s(funcs, budget);
  try {
    s.run();
  } catch (const BudgetExceeded&) {
    out.trace = std::move(s.trace);
    out.trace.nodes.clear();
    return out;
  }
  out.trace = std::move(s.trace);
  if (s.found) {
    Combination b = *s.found;
    Q lo = *std::min_element(b.begin(), b.end());
    for (auto& x : b) x -= lo;
    if (!verify_twice(funcs, b).holds)
      throw std::logic_error("decide_dependence: witness failed verification");
    out.verdict = Verdict::Dependent;
    out.witness = std::move(b);
    out.trace.nodes.clear();
  } else {
    out.verdict = Verdict::Independent;
  }
  return out;
}

bool replay_independence(const std::vector<PLFunction>& funcs, const DependenceTrace& t,
                         std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (funcs.empty()) return fail("empty family");
  auto cells = distinct_cells(common_cells(funcs));
  if (t.nodes.empty()) return fail("no search tree");
  std::vector<char> used(t.nodes.size(), 0);
  std::function<bool(int, const System&, std::vector<char>&)> walk =
      [&](int n, const System& s, std::vector<char>& assigned) -> bool {
    if (n < 0 || n >= static_cast<int>(t.nodes.size()) || used[n])
      return fail("malformed tree at node " + std::to_string(n));
    used[n] = 1;
    const auto& node = t.nodes[n];
    if (node.cell < 0 || node.cell >= static_cast<int>(cells.size()) || assigned[node.cell])
      return fail("bad cell at node " + std::to_string(n));
    auto pats = cell_patterns(cells[node.cell]);
    std::vector<char> seen(pats.size(), 0);
    for (const auto& br : node.branches) {
      if (br.pattern < 0 || br.pattern >= static_cast<int>(pats.size()) || seen[br.pattern])
        return fail("bad branch at node " + std::to_string(n));
      seen[br.pattern] = 1;
      System u = s;
      bool ok = true;
      for (const auto& c : pattern_constraints(cells[node.cell], pats[br.pattern]))
        if (!u.add(c)) {
          ok = false;
          break;
        }
      if (br.child < 0) {
        if (ok && u.solve()) return fail("leaf is feasible at node " + std::to_string(n));
        continue;
      }
      if (!ok) return fail("infeasible branch has a subtree at node " + std::to_string(n));
      assigned[node.cell] = 1;
      bool r = walk(br.child, u, assigned);
      assigned[node.cell] = 0;
      if (!r) return false;
    }
    for (char c : seen)
      if (!c) return fail("pattern not covered at node " + std::to_string(n));
    return true;
  };
  System s(static_cast<int>(funcs.size()));
  std::vector<char> assigned(cells.size(), 0);
  return walk(0, s, assigned);
}

PatternSolution solve_pattern(const std::vector<PLFunction>& funcs,
                              const std::vector<Anchor>& anchors) {
  PatternSolution out;
  const int F = static_cast<int>(funcs.size());
  if (F == 0) throw std::invalid_argument("solve_pattern: empty family");
  std::vector<char> part(F, 0);
  for (const auto& a : anchors) {
    if (a.winners.size() < 2) throw std::invalid_argument("solve_pattern: fewer than two winners");
    for (int w : a.winners) {
      if (w < 0 || w >= F) throw std::out_of_range("solve_pattern: winner index");
      part[w] = 1;
    }
  }
  System s(F);
  std::vector<int> parts;
  for (int i = 0; i < F; ++i)
    if (part[i]) parts.push_back(i);
  for (const auto& a : anchors) {
    const int w0 = a.winners[0];
    const Q v0 = funcs[w0].eval(a.point);
    for (int f : parts) {
      Aff r;
      r.coef[f] = 1;
      r.coef[w0] -= 1;
      r.c = funcs[f].eval(a.point) - v0;
      bool win = std::find(a.winners.begin(), a.winners.end(), f) != a.winners.end();
      if (f == w0) continue;
      if (!s.add(as_con(r, win))) {
        out.reason = "inconsistent equalities";
        return out;
      }
    }
  }
  auto sol = s.solve();
  if (!sol) {
    out.reason = "inconsistent system";
    return out;
  }
  Combination b = *sol;
  int comps = 0;
  for (int f : parts)
    if (s.find(f) == f) ++comps;
  out.unique = comps == 1;
  if (parts.size() < static_cast<size_t>(F)) {
    std::vector<PLFunction> pf;
    std::vector<Q> pb;
    for (int f : parts) {
      pf.push_back(funcs[f]);
      pb.push_back(b[f]);
    }
    PLFunction th = plf_min(pf, pb);
    for (int f = 0; f < F; ++f)
      if (!part[f]) b[f] = plf_sub(th, funcs[f]).max_value() + 1;
  }
  Q lo = *std::min_element(b.begin(), b.end());
  for (auto& x : b) x -= lo;
  auto rep = verify_twice(funcs, b);
  if (!rep.holds) {
    out.reason = "minimum attained once somewhere";
    return out;
  }
  out.b = std::move(b);
  return out;
}

}  // namespace troplin
