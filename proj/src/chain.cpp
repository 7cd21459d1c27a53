#include "troplin/chain.hpp"

#include <algorithm>
#include <stdexcept>

namespace troplin {

long rho(long g, long r, long d) { return g - (r + 1) * (g - d + r); }
long s_param(long g, long r, long d) { return g - d + r; }

ChainParams make_admissible_chain(int g, long mbar) {
  if (g < 1 || mbar < 1) throw std::invalid_argument("chain needs g >= 1 and mbar >= 1");
  ChainParams p;
  p.g = g;
  p.mbar = mbar;
  p.trusted = true;
  Z B = 2 * g + 3;
  Z Bg;
  mpz_pow_ui(Bg.get_mpz_t(), B.get_mpz_t(), static_cast<unsigned long>(g));
  Q ell(Z(4 * g) * Bg + 1);
  p.ell.assign(g + 1, ell);
  p.m.assign(g + 1, Q(0));
  Z mk = 1;
  for (int k = 1; k <= g; ++k) {
    p.m[k] = Q(mk);
    mk *= B;
  }
  p.n.assign(g + 1, Q(Z(2 * mbar + 1)) * ell);
  p.ell[0] = 0;
  return p;
}

bool has_small_relation(const std::vector<Q>& m, long bound) {
  // Scale to integers, then meet in the middle over the two halves.
  Z lcd = 1;
  for (const auto& q : m) lcd = lcm(lcd, Z(q.get_den()));
  std::vector<Z> w;
  for (const auto& q : m) w.push_back(Z(q * lcd));
  const size_t h = w.size() / 2;
  auto sums = [&](size_t lo, size_t hi, bool& zero_hit) {
    std::vector<Z> out{Z(0)};
    zero_hit = false;
    for (size_t i = lo; i < hi; ++i) {
      std::vector<Z> next;
      next.reserve(out.size() * (2 * bound + 1));
      for (const auto& s : out)
        for (long c = -bound; c <= bound; ++c) next.push_back(s + c * w[i]);
      out = std::move(next);
    }
    // out[0] is not the zero combination in general; count zeros instead
    long zeros = std::count(out.begin(), out.end(), Z(0));
    zero_hit = zeros > 1;
    std::sort(out.begin(), out.end());
    return out;
  };
  bool z1 = false, z2 = false;
  std::vector<Z> a = sums(0, h, z1);
  std::vector<Z> b = sums(h, w.size(), z2);
  if (z1 || z2) return true;
  for (const auto& s : a) {
    if (s == 0) continue;
    if (std::binary_search(b.begin(), b.end(), Z(-s))) return true;
  }
  return false;
}

AdmissibilityReport check_admissible(const ChainParams& p) {
  AdmissibilityReport rep;
  const int g = p.g;
  if (static_cast<int>(p.ell.size()) != g + 1 || static_cast<int>(p.m.size()) != g + 1 ||
      static_cast<int>(p.n.size()) != g + 1)
    throw std::invalid_argument("chain parameter arrays have wrong sizes");
  for (int k = 1; k <= g; ++k) {
    if (p.m[k] <= 0 || p.ell[k] <= 0) throw std::invalid_argument("loop lengths must be positive");
    if (!(Q(4 * g) * p.m[k] < p.ell[k])) {
      rep.loop_ratio = false;
      rep.detail += "4g m_" + std::to_string(k) + " >= ell; ";
    }
    Q lim = std::min(p.n[k - 1], p.n[k]);
    if (!(Q(2 * p.mbar) * p.ell[k] < lim)) {
      rep.long_bridges = false;
      rep.detail += "bridges too short at loop " + std::to_string(k) + "; ";
    }
  }
  std::vector<Q> ms(p.m.begin() + 1, p.m.end());
  if (g <= 6) {
    rep.relation_checked = true;
    rep.relation_free = !has_small_relation(ms, g + 1);
    if (!rep.relation_free) rep.detail += "small relation among m_k; ";
  } else if (!p.trusted) {
    rep.relation_free = false;
    rep.detail += "relation check skipped for g > 6 and lengths not trusted; ";
  }
  return rep;
}

int LingeringPath::lingering_count() const {
  int c = 0;
  for (size_t i = 1; i < steps.size(); ++i)
    if (steps[i].kind == StepKind::Linger) ++c;
  return c;
}

Chain::Chain(ChainParams p) : p_(std::move(p)) {
  const int g = p_.g;
  if (g < 1) throw std::invalid_argument("chain needs g >= 1");
  std::vector<Edge> es(3 * g + 1);
  for (int k = 0; k <= g; ++k) es[bridge(k)] = {w(k), v(k + 1), p_.n.at(k)};
  for (int k = 1; k <= g; ++k) {
    es[top(k)] = {v(k), w(k), p_.ell.at(k)};
    es[bottom(k)] = {v(k), w(k), p_.m.at(k)};
  }
  g_ = make_graph(2 * g + 2, std::move(es));
}

GraphPoint Chain::ccw_point(int k, const Q& y0) const {
  Q y = canonical_x(k, y0);
  const Q& m = p_.m[k];
  if (y <= m) return g_->point(bottom(k), y);
  return g_->point(top(k), loop_length(k) - y);
}

std::optional<Q> Chain::ccw_coord(int k, const GraphPoint& pt) const {
  if (pt == g_->vertex_point(v(k))) return Q(0);
  if (pt.edge == bottom(k)) return pt.t;
  if (pt.edge == top(k)) return loop_length(k) - pt.t;
  return std::nullopt;
}

int Chain::piece_of(const GraphPoint& pt) const {
  if (pt.edge % 3 == 0) {
    int k = pt.edge / 3;
    return pt.t * 2 < p_.n[k] ? k : k + 1;
  }
  return pt.edge / 3 + 1;
}

int Chain::loop_of(const GraphPoint& pt) const {
  if (pt.edge % 3 == 0) return 0;
  int k = pt.edge / 3 + 1;
  if (pt.t == 0 || pt.t == g_->edge(pt.edge).len) return 0;
  return k;
}

Divisor Chain::to_divisor(const DivisorData& d) const {
  if (static_cast<int>(d.x.size()) != p_.g + 1) throw std::invalid_argument("data has wrong genus");
  Divisor D;
  D.add(g_->vertex_point(w(0)), d.d0);
  for (int k = 1; k <= p_.g; ++k) {
    if (d.x[k] < 0 || d.x[k] >= loop_length(k)) throw std::invalid_argument("x out of range");
    if (d.x[k] != 0) D.add(ccw_point(k, d.x[k]), 1);
  }
  return D;
}

DivisorData Chain::from_divisor(const Divisor& D) const {
  DivisorData d;
  d.x.assign(p_.g + 1, Q(0));
  for (const auto& [pt, n] : D.terms()) {
    if (pt == g_->vertex_point(w(0))) {
      d.d0 = n;
      continue;
    }
    int k = 0;
    for (int j = 1; j <= p_.g && !k; ++j)
      if ((pt.edge == top(j) || pt.edge == bottom(j)) && !(pt == g_->vertex_point(v(j)))) k = j;
    if (!k || n != 1 || d.x[k] != 0) throw std::invalid_argument("divisor is not w0-reduced");
    d.x[k] = *ccw_coord(k, pt);
  }
  return d;
}

long degree_of(const DivisorData& d) {
  long deg = d.d0;
  for (size_t k = 1; k < d.x.size(); ++k)
    if (d.x[k] != 0) ++deg;
  return deg;
}

namespace {

bool chamber(const std::vector<long>& p) {
  for (size_t j = 0; j < p.size(); ++j) {
    if (p[j] <= 0) return false;
    if (j > 0 && p[j - 1] <= p[j]) return false;
  }
  return true;
}

}  // namespace

LingeringPath lingering_path(const Chain& c, const DivisorData& d, int r) {
  const int g = c.genus();
  if (r < 0) throw std::invalid_argument("negative rank");
  LingeringPath P;
  P.r = r;
  P.p.assign(g + 1, std::vector<long>(r));
  for (int j = 0; j < r; ++j) P.p[0][j] = d.d0 - j;
  P.steps.assign(g + 1, Step{});
  P.in_chamber = chamber(P.p[0]);
  for (int i = 1; i <= g; ++i) {
    const auto& prev = P.p[i - 1];
    auto& cur = P.p[i];
    cur = prev;
    const Q& mi = c.params().m[i];
    if (d.x[i] == 0) {
      for (auto& y : cur) --y;
      P.steps[i] = {StepKind::Down, -1};
    } else {
      int dir = -1;
      if (chamber(prev)) {
        for (int j = 0; j < r; ++j) {
          if (c.canonical_x(i, Q(prev[j] + 1) * mi) != d.x[i]) continue;
          std::vector<long> nxt = prev;
          ++nxt[j];
          if (chamber(nxt)) dir = j;
        }
      }
      if (dir >= 0) {
        ++cur[dir];
        P.steps[i] = {StepKind::Dir, dir};
      } else {
        P.steps[i] = {StepKind::Linger, -1};
      }
    }
    if (!chamber(cur)) P.in_chamber = false;
  }
  return P;
}

bool rank_at_least(const Chain& c, const DivisorData& d, int r) {
  if (r == 0) return d.d0 >= 0;
  return lingering_path(c, d, r).in_chamber;
}

long rank_exact(const Chain& c, const DivisorData& d) {
  if (!rank_at_least(c, d, 0)) return -1;
  long lo = 0, hi = d.d0;
  while (lo < hi) {
    long mid = (lo + hi + 1) / 2;
    if (rank_at_least(c, d, static_cast<int>(mid))) lo = mid;
    else hi = mid - 1;
  }
  return lo;
}

Tableau standard_tableau(int r, int s) {
  Tableau t;
  t.r = r;
  t.s = s;
  t.rows.assign(s, std::vector<int>(r + 1));
  for (int l = 0; l <= r; ++l)
    for (int row = 0; row < s; ++row) t.rows[row][l] = l * s + row + 1;
  return t;
}

bool is_standard(const Tableau& t, int g) {
  if (t.s < 0 || t.r < 0 || static_cast<int>(t.rows.size()) != t.s) return false;
  if ((t.r + 1) * t.s != g) return false;
  std::vector<bool> seen(g + 1, false);
  for (int row = 0; row < t.s; ++row) {
    if (static_cast<int>(t.rows[row].size()) != t.r + 1) return false;
    for (int col = 0; col <= t.r; ++col) {
      int v = t.rows[row][col];
      if (v < 1 || v > g || seen[v]) return false;
      seen[v] = true;
      if (col > 0 && t.rows[row][col - 1] >= v) return false;
      if (row > 0 && t.rows[row - 1][col] >= v) return false;
    }
  }
  return true;
}

DivisorData tableau_to_divisor(const Tableau& t, const Chain& c, long d) {
  const int g = c.genus();
  if (!is_standard(t, g)) throw std::invalid_argument("non-standard tableau");
  if (d != g + t.r - t.s) throw std::invalid_argument("degree does not match tableau shape");
  std::vector<int> column(g + 1, -1);
  for (int row = 0; row < t.s; ++row)
    for (int col = 0; col <= t.r; ++col) column[t.rows[row][col]] = col;
  DivisorData data;
  data.d0 = t.r;
  data.x.assign(g + 1, Q(0));
  std::vector<long> p(t.r);
  for (int j = 0; j < t.r; ++j) p[j] = t.r - j;
  for (int i = 1; i <= g; ++i) {
    int j = column[i];
    if (j == t.r) {
      for (auto& y : p) --y;
    } else {
      data.x[i] = c.canonical_x(i, Q(p[j] + 1) * c.params().m[i]);
      ++p[j];
    }
  }
  return data;
}

Tableau path_to_tableau(const LingeringPath& P, int s) {
  const int g = static_cast<int>(P.steps.size()) - 1;
  std::vector<std::vector<int>> cols(P.r + 1);
  for (int i = 1; i <= g; ++i) {
    const Step& st = P.steps[i];
    if (st.kind == StepKind::Linger) throw std::invalid_argument("lingering step has no column");
    cols[st.kind == StepKind::Down ? P.r : st.dir].push_back(i);
  }
  Tableau t;
  t.r = P.r;
  t.s = s;
  t.rows.assign(s, std::vector<int>(P.r + 1));
  for (int col = 0; col <= P.r; ++col) {
    if (static_cast<int>(cols[col].size()) != s) throw std::invalid_argument("path is not rectangular");
    for (int row = 0; row < s; ++row) t.rows[row][col] = cols[col][row];
  }
  return t;
}

bool is_vertex_avoiding(const Chain& c, const DivisorData& d, int r, long deg) {
  const int g = c.genus();
  if (degree_of(d) != deg) return false;
  LingeringPath P = lingering_path(c, d, r);
  if (!P.in_chamber) return false;
  if (P.lingering_count() != rho(g, r, deg)) return false;
  for (int i = 1; i <= g; ++i) {
    if (d.x[i] == 0) continue;
    const Q& mi = c.params().m[i];
    if (d.x[i] == c.canonical_x(i, mi)) return false;
    for (int j = 0; j <= r; ++j)
      if (d.x[i] == c.canonical_x(i, Q(P.at(i - 1, j)) * mi)) return false;
  }
  return true;
}

CanonicalFamily::CanonicalFamily(const Chain& c, const DivisorData& d, int r)
    : c_(c), d_(d), r_(r) {
  if (!is_vertex_avoiding(c, d, r, degree_of(d)))
    throw std::invalid_argument("divisor class is not vertex avoiding");
  path_ = lingering_path(c, d, r);
  D_ = c.to_divisor(d);
  Di_.resize(r + 1);
  psi_.resize(r + 1);
  for (int i = 0; i <= r; ++i) build(i);
}

std::optional<Q> CanonicalFamily::chip(int k, int i) const {
  if (i < 0 || i > r_) throw std::out_of_range("index out of range");
  const Step& st = path_.steps.at(k);
  const Q& mk = c_.params().m[k];
  long pi = path_.at(k - 1, i);
  switch (st.kind) {
    case StepKind::Dir:
      if (st.dir == i) return std::nullopt;
      return c_.canonical_x(k, d_.x[k] - Q(pi) * mk);
    case StepKind::Down:
      if (i == r_) return std::nullopt;
      return c_.canonical_x(k, Q(1 - pi) * mk);
    case StepKind::Linger:
      return c_.canonical_x(k, d_.x[k] - Q(pi) * mk);
  }
  return std::nullopt;
}

long CanonicalFamily::prefix_degree(int k, int i) const {
  const int g = c_.genus();
  long deg = i;
  for (int j = 1; j <= std::min(k, g); ++j)
    if (chip(j, i)) ++deg;
  if (k > g) deg += r_ - i;
  return deg;
}

void CanonicalFamily::build(int i) {
  const GraphPtr& G = c_.graph();
  const ChainParams& P = c_.params();
  const int g = c_.genus();
  if (i == r_) {
    Di_[i] = D_;
    psi_[i] = PLFunction::constant(G, 0);
    return;
  }
  std::vector<EdgeFn> pieces(G->num_edges());
  Q val = 0;
  auto linear = [](const Q& len, const Q& y0, long s) {
    return EdgeFn{{Q(0), len}, {y0, y0 + Q(s) * len}, {}};
  };
  pieces[Chain::bridge(0)] = linear(P.n[0], val, path_.at(0, i));
  val += Q(path_.at(0, i)) * P.n[0];
  Divisor expect;
  expect.add(G->vertex_point(Chain::w(0)), i);
  for (int k = 1; k <= g; ++k) {
    const long s_in = path_.at(k - 1, i);
    const long s_out = path_.at(k, i);
    const Q T = c_.loop_length(k);
    const Q& mk = P.m[k];
    std::vector<std::pair<Q, long>> ev;  // ccw position, jump of the ccw derivative
    if (d_.x[k] != 0) ev.push_back({d_.x[k], +1});
    auto y = chip(k, i);
    if (y) {
      ev.push_back({*y, -1});
      expect.add(c_.ccw_point(k, *y), 1);
    }
    ev.push_back({mk, -s_out});
    std::sort(ev.begin(), ev.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    Q acc = 0;
    long total = 0;
    for (const auto& [t, j] : ev) {
      acc += Q(j) * (T - t);
      total += j;
    }
    if (total != -s_in) throw std::logic_error("loop degree imbalance");
    Q bq = -acc / T;
    if (!is_integer(bq)) throw std::logic_error("non-integer bottom slope");
    long f = to_long(bq);
    // ccw profile: positions and values
    std::vector<Q> ts{Q(0)}, vs{val};
    for (const auto& [t, j] : ev) {
      if (t != ts.back()) {
        vs.push_back(vs.back() + Q(f) * (t - ts.back()));
        ts.push_back(t);
      }
      f += j;
    }
    vs.push_back(vs.back() + Q(f) * (T - ts.back()));
    ts.push_back(T);
    if (vs.back() != val) throw std::logic_error("loop profile does not close");
    EdgeFn bot, topf;
    Q wval;
    for (size_t a = 0; a < ts.size(); ++a) {
      if (ts[a] <= mk) {
        bot.x.push_back(ts[a]);
        bot.y.push_back(vs[a]);
        if (ts[a] == mk) wval = vs[a];
      }
    }
    for (size_t a = ts.size(); a-- > 0;) {
      if (ts[a] >= mk) {
        topf.x.push_back(T - ts[a]);
        topf.y.push_back(vs[a]);
      }
    }
    pieces[Chain::bottom(k)] = std::move(bot);
    pieces[Chain::top(k)] = std::move(topf);
    pieces[Chain::bridge(k)] = linear(P.n[k], wval, s_out);
    val = wval + Q(s_out) * P.n[k];
  }
  expect.add(G->vertex_point(Chain::v(g + 1)), r_ - i);
  psi_[i] = PLFunction::from_breakpoints(G, std::move(pieces));
  Di_[i] = D_ + divisor_of_function(psi_[i]);
  if (!(Di_[i] == expect)) throw std::logic_error("representative D_i differs from prediction");
}

PLFunction CanonicalFamily::psi_multiset(const std::vector<int>& I) const {
  if (static_cast<long>(I.size()) > c_.params().mbar)
    throw std::invalid_argument("multiset larger than the chain supports");
  PLFunction acc = PLFunction::constant(c_.graph(), 0);
  for (int i : I) acc = plf_add(acc, psi(i));
  return acc;
}

Divisor CanonicalFamily::D_multiset(const std::vector<int>& I) const {
  Divisor acc;
  for (int i : I) acc = acc + Di(i);
  return acc;
}

ShapeCase shape_case(const CanonicalFamily& fam, int i, int l, int k) {
  const int r = fam.r();
  const int g = fam.chain().genus();
  if (r + 1 == 0 || g % (r + 1) != 0) throw std::invalid_argument("not a rectangular shape");
  const int s = g / (r + 1);
  if (l < 0 || l >= r) throw std::out_of_range("column r carries no chip of D");
  if (k < l * s + 1 || k > (l + 1) * s) throw std::out_of_range("loop outside the column window");
  const ChainParams& P = fam.chain().params();
  const Q& mk = P.m[k];
  const long sigma = fam.path().at(k - 1, l);
  ShapeCase sc;
  if (i < l) {
    sc.which = 1;
    sc.left_slope = sc.right_slope = r + s - i;
    sc.bottom_slope = r + s - i - 1;
    sc.top_offset = Q(r + s - i - 1 - sigma) * mk;
  } else if (i > l) {
    sc.which = 2;
    sc.left_slope = sc.right_slope = sc.bottom_slope = r - i;
    sc.top_offset = P.ell[k] - Q(sigma - r + i) * mk;
  } else {
    sc.which = 3;
    sc.left_slope = sc.bottom_slope = r - l + k - l * s - 1;
    sc.right_slope = r - l + k - l * s;
  }
  auto y = fam.chip(k, i);
  std::optional<Q> actual;
  if (y) actual = fam.chain().loop_length(k) - *y;
  const EdgeFn& bot = fam.psi(i).on_edge(Chain::bottom(k));
  sc.matches = actual == sc.top_offset && bot.slope.size() == 1 &&
               bot.slope[0] == sc.bottom_slope && fam.path().at(k - 1, i) == sc.left_slope &&
               fam.path().at(k, i) == sc.right_slope;
  return sc;
}

}  // namespace troplin
