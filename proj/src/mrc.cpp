#include "troplin/mrc.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace troplin {

long ceil_half(long r) { return (r + 1) / 2; }
long eps_parity(long r) { return r % 2 == 0 ? 0 : 1; }

bool identity_check(long g, long r, long d) {
  const long s = s_param(g, r, d);
  if (rho(g, r, d) != 0 || s < 0 || r < 0) return false;
  Z lhs = binom(r + 2, 2) - binom(std::max(0L, r - s), 2) + binom(s, 2);
  return lhs == Z(2 * d - g + 1);
}

std::string region_name(Region x) {
  switch (x) {
    case Region::Kept: return "kept";
    case Region::LowerTriangle: return "lower-triangle";
    case Region::UpperTriangle: return "upper-triangle";
    case Region::Chevron: return "chevron";
  }
  return "?";
}

Region classify_pair(long r, long s, int i, int j) {
  if (i > j) std::swap(i, j);
  if (r <= 2 * s) return Region::Kept;
  const long e = eps_parity(r);
  const long sum = i + j;
  if (j >= i + 2 && sum < r - 2 * s + e) return Region::LowerTriangle;
  if (j >= i + 2 && sum > r + 2 * s) return Region::UpperTriangle;
  if (sum >= r - s + e && sum <= r + s && (2 * i <= r - 2 * s - 2 + e || 2 * j >= r + 2 * s + 2))
    return Region::Chevron;
  return Region::Kept;
}

std::vector<Pair> all_pairs(int r) {
  std::vector<Pair> out;
  for (int i = 0; i <= r; ++i)
    for (int j = i; j <= r; ++j) out.push_back({i, j});
  return out;
}

PairSet build_A(long g, long r, long d) {
  if (r < 0 || rho(g, r, d) != 0) throw std::invalid_argument("build_A needs rho = 0");
  PairSet A;
  A.g = g;
  A.r = r;
  A.d = d;
  A.s = s_param(g, r, d);
  for (auto [i, j] : all_pairs(static_cast<int>(r))) {
    Region x = classify_pair(r, A.s, i, j);
    if (x == Region::Kept) A.kept.push_back({i, j});
    else A.excluded.push_back({{i, j}, x});
  }
  Z want = std::min(binom(r + 2, 2), Z(2 * d - g + 1));
  if (Z(static_cast<long>(A.kept.size())) != want)
    throw std::logic_error("build_A: size does not match min{C(r+2,2), 2d-g+1}");
  return A;
}

Window window(long g, long r, long d, long l) {
  const long s = s_param(g, r, d);
  const long h = ceil_half(r);
  if (l < std::max(0L, h - s)) throw std::invalid_argument("window: l below range");
  Window w;
  w.l = l;
  if (l <= h) {
    w.a = l * s + 1;
    w.b = l * (s + 1) - h + s;
  } else {
    w.a = l * (s + 1) - h + 1;
    w.b = (l + 1) * s;
  }
  w.level = l - s + h;
  if (w.a > w.b + 1) throw std::invalid_argument("window: undefined for this l");
  return w;
}

namespace {

long pair_prefix(const CanonicalFamily& fam, int k, const Pair& I) {
  return fam.prefix_degree(k, I.first) + fam.prefix_degree(k, I.second);
}

}  // namespace

std::vector<Pair> permissible(const CanonicalFamily& fam, const std::vector<long>& S, int k,
                              const std::vector<Pair>& among) {
  const int g = fam.chain().genus();
  if (k < 1 || k > g) throw std::out_of_range("permissible: loop index");
  if (static_cast<int>(S.size()) < k + 1) throw std::invalid_argument("permissible: prefix sums");
  std::vector<Pair> out;
  for (const auto& I : among)
    if (pair_prefix(fam, k - 1, I) >= S[k - 1] && pair_prefix(fam, k, I) <= S[k]) out.push_back(I);
  return out;
}

std::vector<Pair> permissible_window(const CanonicalFamily& fam, const std::vector<long>& S,
                                     int a, int b, const std::vector<Pair>& among) {
  std::set<Pair> acc;
  for (int k = a; k <= b; ++k)
    for (const auto& I : permissible(fam, S, k, among)) acc.insert(I);
  return {acc.begin(), acc.end()};
}

std::vector<Pair> counting_lemma(long g, long r, long d, long l) {
  const long h = ceil_half(r);
  (void)g;
  (void)d;
  std::vector<Pair> out;
  for (long i = 0; i <= r; ++i) {
    long j = l + h - i;
    if (i < l && l < j && j <= r) out.push_back({static_cast<int>(i), static_cast<int>(j)});
  }
  if (l >= 0 && l <= r) out.push_back({static_cast<int>(l), static_cast<int>(l)});
  std::sort(out.begin(), out.end());
  return out;
}

long counting_sigma(long g, long r, long d, long l) {
  return 2 * r - l + s_param(g, r, d) - ceil_half(r);
}

std::string Relation::to_string() const {
  if (coef.empty()) return value.get_str();
  std::ostringstream os;
  bool first = true;
  for (size_t k = 1; k < coef.size(); ++k) {
    long c = coef[k];
    if (c == 0) continue;
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    long a = c < 0 ? -c : c;
    if (a != 1) os << a << " ";
    os << "m" << k;
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

namespace {

// Balanced base-B digits of v over m_k = B^(k-1); sign fixed so the first
// nonzero coefficient is positive.
Relation decode_relation(const ChainParams& P, Q v) {
  Relation rel;
  const int g = P.g;
  bool geometric = g >= 1 && P.m[1] == 1 && v.get_den() == 1;
  Z B = g >= 2 ? Z(P.m[2].get_num()) : Z(2 * g + 3);
  for (int k = 2; geometric && k <= g; ++k)
    if (P.m[k] != P.m[k - 1] * Q(B)) geometric = false;
  if (!geometric) {
    rel.value = v;
    return rel;
  }
  rel.coef.assign(g + 1, 0);
  Z V = v.get_num();
  int k = 1;
  bool fits = true;
  while (V != 0) {
    Z rem = V % B;
    if (rem < 0) rem += B;
    if (rem * 2 > B) rem -= B;
    if (k > g) {
      fits = false;
      break;
    }
    rel.coef[k] = rem.get_si();
    V = (V - rem) / B;
    ++k;
  }
  if (!fits) {
    rel.coef.clear();
    rel.value = v;
    return rel;
  }
  int lead = 0;
  for (int t = 1; t <= g && lead == 0; ++t)
    if (rel.coef[t] != 0) lead = rel.coef[t] > 0 ? 1 : -1;
  if (lead < 0) {
    for (auto& c : rel.coef) c = -c;
    v = -v;
  }
  rel.value = v;
  rel.small = true;
  for (int t = 1; t <= g; ++t)
    if (std::abs(rel.coef[t]) > g + 1) rel.small = false;
  return rel;
}

// Union-find with potentials: pot[x] = b_x - b_root(x).
struct PotentialUF {
  std::vector<int> parent;
  std::vector<Q> pot;
  explicit PotentialUF(int n) : parent(n), pot(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    if (parent[x] == x) return x;
    int root = find(parent[x]);
    if (parent[x] != root) {
      pot[x] += pot[parent[x]];
      parent[x] = root;
    }
    return root;
  }
  // Imposes b_v - b_u = c. Returns false if u, v already joined.
  bool unite(int u, int v, const Q& c) {
    int ru = find(u), rv = find(v);
    if (ru == rv) return false;
    // b_v = b_u + c; b_rv = b_v - pot[v]; b_ru = b_u - pot[u]
    parent[rv] = ru;
    pot[rv] = pot[u] + c - pot[v];
    return true;
  }
  Q diff(int u, int v) {  // b_v - b_u, same component
    find(u);
    find(v);
    return pot[v] - pot[u];
  }
};

}  // namespace

Relation extract_relation(const CanonicalFamily& fam, const std::vector<TieEdge>& edges) {
  std::map<Pair, int> id;
  for (const auto& e : edges) {
    if (e.u == e.v) throw std::invalid_argument("extract_relation: loop edge");
    id.emplace(e.u, 0);
    id.emplace(e.v, 0);
  }
  int n = 0;
  for (auto& kv : id) kv.second = n++;
  PotentialUF uf(n);
  std::vector<std::vector<std::pair<int, int>>> adj(n);  // (neighbor, edge index)
  auto value = [&](const Pair& I, const GraphPoint& p) -> Q {
    return fam.psi(I.first).eval(p) + fam.psi(I.second).eval(p);
  };
  for (size_t ei = 0; ei < edges.size(); ++ei) {
    const auto& e = edges[ei];
    int u = id[e.u], v = id[e.v];
    Q c = value(e.u, e.point) - value(e.v, e.point);
    if (uf.unite(u, v, c)) {
      adj[u].push_back({v, static_cast<int>(ei)});
      adj[v].push_back({u, static_cast<int>(ei)});
      continue;
    }
    Q delta = uf.diff(u, v) - c;
    Relation rel = decode_relation(fam.chain().params(), delta);
    // Recover the tree path from u to v.
    std::vector<int> from(n, -2), via(n, -1);
    std::vector<int> queue = {u};
    from[u] = -1;
    for (size_t q = 0; q < queue.size(); ++q)
      for (auto [w, ej] : adj[queue[q]])
        if (from[w] == -2) {
          from[w] = queue[q];
          via[w] = ej;
          queue.push_back(w);
        }
    for (int x = v; x != u; x = from[x]) rel.cycle.push_back(via[x]);
    std::reverse(rel.cycle.begin(), rel.cycle.end());
    rel.cycle.push_back(static_cast<int>(ei));
    return rel;
  }
  throw std::invalid_argument("extract_relation: tie graph is acyclic");
}

// ---------------------------------------------------------------------------
// Instances

namespace {

struct Plan {
  StepKind kind = StepKind::Linger;
  int dir = -1;
  int lo = -1;  // chip below p(lo) m_k; -1 for no bound
  int hi = -1;  // chip above p(hi) m_k; r + 1 for no bound
};

struct Blueprint {
  std::vector<Plan> plans;  // plans[k - 1] for loop k
  std::vector<Pair> A;
  InstanceMeta meta;
};

DivisorData materialize(const Chain& c, int r, const std::vector<Plan>& plans) {
  const int g = c.genus();
  if (static_cast<int>(plans.size()) != g) throw std::logic_error("materialize: plan length");
  DivisorData data;
  data.d0 = r;
  data.x.assign(g + 1, Q(0));
  std::vector<long> p(r + 1, 0);
  for (int j = 0; j < r; ++j) p[j] = r - j;
  for (int k = 1; k <= g; ++k) {
    const Plan& pl = plans[k - 1];
    const Q& m = c.params().m[k];
    const Q T = c.loop_length(k);
    if (pl.kind == StepKind::Dir) {
      data.x[k] = c.canonical_x(k, Q(p[pl.dir] + 1) * m);
      ++p[pl.dir];
    } else if (pl.kind == StepKind::Down) {
      for (int j = 0; j < r; ++j) --p[j];
    } else {
      Q upper = pl.lo < 0 ? T : Q(p[pl.lo]) * m;
      Q lower = pl.hi > r ? Q(0) : Q(p[pl.hi]) * m;
      std::vector<Q> cut = {lower, upper, Q(0), m};
      for (int j = 0; j <= r; ++j) {
        cut.push_back(Q(p[j]) * m);
        cut.push_back(Q(p[j] + 1) * m);
      }
      std::vector<Q> inside;
      for (auto& x : cut)
        if (x >= lower && x <= upper) inside.push_back(x);
      std::sort(inside.begin(), inside.end());
      inside.erase(std::unique(inside.begin(), inside.end()), inside.end());
      Q best_len = -1, best_mid;
      for (size_t t = 0; t + 1 < inside.size(); ++t) {
        Q len = inside[t + 1] - inside[t];
        if (len > best_len) {
          best_len = len;
          best_mid = (inside[t] + inside[t + 1]) / 2;
        }
      }
      if (best_len <= 0) throw std::logic_error("materialize: empty lingering interval");
      data.x[k] = best_mid;
    }
  }
  return data;
}

std::vector<Plan> tableau_plans(int r, int s) {
  Tableau t = standard_tableau(r, s);
  const int g = (r + 1) * s;
  std::vector<int> column(g + 1, -1);
  for (int row = 0; row < s; ++row)
    for (int col = 0; col <= r; ++col) column[t.rows[row][col]] = col;
  std::vector<Plan> out;
  for (int i = 1; i <= g; ++i) {
    Plan pl;
    if (column[i] == r) pl.kind = StepKind::Down;
    else {
      pl.kind = StepKind::Dir;
      pl.dir = column[i];
    }
    out.push_back(pl);
  }
  return out;
}

Plan split_plan(int k, int r) {
  // psi_i left for i <= k/2, right for i > k/2
  Plan pl;
  pl.kind = StepKind::Linger;
  pl.lo = k / 2;
  pl.hi = k / 2 + 1;
  if (pl.hi > r) pl.hi = r + 1;
  return pl;
}

std::vector<Window> rho0_schedule(long g, long r, long d) {
  std::vector<Window> out;
  const long s = s_param(g, r, d);
  for (long l = std::max(0L, ceil_half(r) - s); l <= r; ++l) {
    Window w;
    try {
      w = window(g, r, d, l);
    } catch (const std::invalid_argument&) {
      continue;
    }
    if (w.a >= 1 && w.a <= w.b && w.b <= g) out.push_back(w);
  }
  return out;
}

Blueprint blueprint(long g, long r, long d) {
  const long s = s_param(g, r, d);
  const long rh = rho(g, r, d);
  if (r < 1 || s < 0 || rh < 0) throw std::invalid_argument("instance needs r >= 1, s >= 0, rho >= 0");
  Blueprint bp;
  if (rh == 0) {
    if (s == 0) throw std::invalid_argument("instance needs s >= 1 when rho = 0");
    bp.plans = tableau_plans(static_cast<int>(r), static_cast<int>(s));
    bp.A = build_A(g, r, d).kept;
    bp.meta.kind = "rho0";
    bp.meta.schedule = rho0_schedule(g, r, d);
    return bp;
  }
  const Z full = binom(r + 2, 2);
  const long target = 2 * d - g + 1;
  if (full >= Z(target)) {
    // Insert one lingering loop per new pair.
    const long g1 = g - rh, d1 = d - rh;
    if (s < 1) throw std::invalid_argument("instance needs s >= 1");
    PairSet A1 = build_A(g1, r, d1);
    std::vector<std::pair<Pair, Region>> pool = A1.excluded;
    std::sort(pool.begin(), pool.end());
    if (static_cast<long>(pool.size()) < rh) throw std::logic_error("rho build: too few new pairs");
    pool.resize(rh);
    std::vector<Pair> lower, upper;
    std::map<long, std::vector<Pair>> chevron;  // by l
    const long h = ceil_half(r);
    for (auto& [I, x] : pool) {
      if (x == Region::LowerTriangle) lower.push_back(I);
      else if (x == Region::UpperTriangle) upper.push_back(I);
      else chevron[I.first + I.second - h].push_back(I);
    }
    auto by_diag = [](const Pair& a, const Pair& b) {
      return std::make_pair(a.first + a.second, a) < std::make_pair(b.first + b.second, b);
    };
    std::sort(lower.begin(), lower.end(), by_diag);
    std::sort(upper.begin(), upper.end(), by_diag);
    std::vector<Plan> base = tableau_plans(static_cast<int>(r), static_cast<int>(s));
    // after[t]: chevron loops placed after base loop t
    std::map<long, std::vector<Plan>> after;
    std::map<long, long> chevron_after_count;
    for (auto& [l, pts] : chevron) {
      long b = window(g1, r, d1, l).b;
      for (size_t q = 0; q < pts.size(); ++q) {
        Plan pl;
        pl.kind = StepKind::Linger;
        pl.lo = l >= 1 ? static_cast<int>(l - 1) : -1;
        pl.hi = l + 1 <= r ? static_cast<int>(l + 1) : static_cast<int>(r + 1);
        after[b].push_back(pl);
      }
      chevron_after_count[l] = static_cast<long>(pts.size());
    }
    std::vector<long> map_base(g1 + 1, 0);
    auto push = [&](const Plan& pl, bool inserted) {
      bp.plans.push_back(pl);
      if (inserted) bp.meta.inserted.push_back(static_cast<int>(bp.plans.size()));
    };
    for (const auto& I : lower) push(split_plan(I.first + I.second, static_cast<int>(r)), true);
    for (const auto& pl : after[0]) push(pl, true);
    for (long t = 1; t <= g1; ++t) {
      push(base[t - 1], false);
      map_base[t] = static_cast<long>(bp.plans.size());
      for (const auto& pl : after[t]) push(pl, true);
    }
    for (const auto& I : upper) push(split_plan(I.first + I.second, static_cast<int>(r)), true);
    if (static_cast<long>(bp.plans.size()) != g) throw std::logic_error("rho build: loop count");

    bp.A = A1.kept;
    for (auto& [I, x] : pool) bp.A.push_back(I);
    std::sort(bp.A.begin(), bp.A.end());
    bp.meta.kind = "rho-injective";
    bp.meta.nu1 = static_cast<long>(lower.size());
    bp.meta.nu2 = static_cast<long>(upper.size());
    bp.meta.nu = rh - bp.meta.nu1 - bp.meta.nu2;
    bp.meta.alpha.assign(2 * r + 1, 0);
    for (long k = 0; k <= 2 * r; ++k)
      for (auto& [I, x] : pool)
        if (I.first + I.second <= k) ++bp.meta.alpha[k];
    // Windows: lower triangle diagonals, then the shifted chevron windows.
    long pos = 1;
    for (size_t q = 0; q < lower.size();) {
      long k = lower[q].first + lower[q].second;
      size_t q2 = q;
      while (q2 < lower.size() && lower[q2].first + lower[q2].second == k) ++q2;
      Window w;
      w.l = -1;
      w.a = pos;
      w.b = pos + static_cast<long>(q2 - q) - 1;
      w.level = k;
      bp.meta.schedule.push_back(w);
      pos = w.b + 1;
      q = q2;
    }
    for (const Window& w1 : rho0_schedule(g1, r, d1)) {
      Window w = w1;
      w.a = map_base[w1.a];
      long extra = chevron_after_count.count(w1.l) ? chevron_after_count[w1.l] : 0;
      w.b = map_base[w1.b] + extra;
      bp.meta.schedule.push_back(w);
    }
    return bp;
  }
  // Surjective side: a smaller instance followed by eta lingering loops.
  const long eta = std::min(rh, target - full.get_si());
  Blueprint inner = blueprint(g - eta, r, d - eta);
  bp = inner;
  for (long q = 0; q < eta; ++q) {
    Plan pl;
    pl.kind = StepKind::Linger;
    pl.lo = -1;
    pl.hi = static_cast<int>(r + 1);
    bp.plans.push_back(pl);
    bp.meta.inserted.push_back(static_cast<int>(bp.plans.size()));
  }
  bp.A = all_pairs(static_cast<int>(r));
  bp.meta.kind = "rho-surjective";
  bp.meta.eta = eta;
  return bp;
}

MrcInstance finish(long g, long r, long d, Blueprint bp, long mbar) {
  MrcInstance inst;
  inst.g = g;
  inst.r = r;
  inst.d = d;
  inst.params = make_admissible_chain(static_cast<int>(g), mbar);
  Chain c(inst.params);
  inst.data = materialize(c, static_cast<int>(r), bp.plans);
  if (!is_vertex_avoiding(c, inst.data, static_cast<int>(r), d))
    throw std::logic_error("instance is not vertex avoiding");
  auto path = lingering_path(c, inst.data, static_cast<int>(r));
  for (int k = 1; k <= g; ++k)
    if (path.steps[k].kind != bp.plans[k - 1].kind)
      throw std::logic_error("instance path differs from the plan");
  inst.A = std::move(bp.A);
  inst.meta = std::move(bp.meta);
  return inst;
}

}  // namespace

MrcInstance build_instance(long g, long r, long d) {
  return finish(g, r, d, blueprint(g, r, d), 2);
}

MrcInstance rho_positive_build(long g, long r, long d) {
  if (rho(g, r, d) <= 0) throw std::invalid_argument("rho_positive_build needs rho > 0");
  return build_instance(g, r, d);
}

MrcInstance generic_vertex_avoiding(long g, long r, long d, long mbar) {
  const long s = s_param(g, r, d);
  const long rh = rho(g, r, d);
  if (r < 1 || s < 0 || rh < 0) throw std::invalid_argument("no vertex avoiding class of this type");
  Blueprint bp;
  if (s > 0) bp.plans = tableau_plans(static_cast<int>(r), static_cast<int>(s));
  for (long q = 0; q < rh; ++q) {
    Plan pl;
    pl.kind = StepKind::Linger;
    pl.lo = -1;
    pl.hi = static_cast<int>(r + 1);
    bp.plans.push_back(pl);
  }
  bp.meta.kind = "generic";
  return finish(g, r, d, std::move(bp), mbar);
}

// ---------------------------------------------------------------------------
// Certifier

namespace {

constexpr long kNodeCap = 200000;

struct Context {
  const MrcInstance& inst;
  Chain chain;
  CanonicalFamily fam;
  int g, r;
  long M;
  std::vector<std::vector<long>> pd;  // pd[k][i] prefix degrees, k = 0..g+1
  std::map<Pair, int> aid;

  explicit Context(const MrcInstance& in)
      : inst(in),
        chain(in.params),
        fam(chain, in.data, static_cast<int>(in.r)),
        g(static_cast<int>(in.g)),
        r(static_cast<int>(in.r)),
        M(2 * in.d - 2 * in.g - 2) {
    pd.assign(g + 2, std::vector<long>(r + 1));
    for (int k = 0; k <= g + 1; ++k)
      for (int i = 0; i <= r; ++i) pd[k][i] = fam.prefix_degree(k, i);
    for (size_t q = 0; q < inst.A.size(); ++q) aid[inst.A[q]] = static_cast<int>(q);
  }

  std::vector<Pair> perm(int k, long level) const {
    // e constant equal to level: S_j = 2j + level
    std::vector<Pair> out;
    for (const auto& I : inst.A) {
      long lo = pd[k - 1][I.first] + pd[k - 1][I.second];
      long hi = pd[k][I.first] + pd[k][I.second];
      if (lo >= 2 * (k - 1) + level && hi <= 2 * k + level) out.push_back(I);
    }
    return out;
  }
};

std::vector<ZFact> slope_facts(const Context& C) {
  std::vector<ZFact> out;
  const auto& path = C.fam.path();
  for (int k = 0; k <= C.g; ++k) {
    std::map<long, int> count;
    for (const auto& I : C.inst.A) ++count[path.at(k, I.first) + path.at(k, I.second)];
    ZFact z;
    z.k = k;
    const long base = 2 * C.pd[k][C.r] - 2 * k;
    for (long e = 2; e <= C.M; ++e) {
      auto it = count.find(base - e);
      if (it == count.end() || it->second < 2) z.forbidden.push_back(e);
    }
    out.push_back(z);
  }
  return out;
}

struct Attempt {
  bool established = false;
  WFact fact;
};

class TieSearch {
 public:
  TieSearch(const Context& C, int a, int b, long level) : C_(C), a_(a), b_(b) {
    fact_.a = a;
    fact_.b = b;
    fact_.level = level;
    std::set<Pair> uni;
    for (int k = a; k <= b; ++k) {
      fact_.perm.push_back(C.perm(k, level));
      uni.insert(fact_.perm.back().begin(), fact_.perm.back().end());
    }
    pairs_.assign(uni.begin(), uni.end());
    for (size_t q = 0; q < pairs_.size(); ++q) idx_[pairs_[q]] = static_cast<int>(q);
    // tie points: v_a, then the chip of D on each loop (or w_k without one)
    points_.push_back(C.chain.graph()->vertex_point(Chain::v(a)));
    cands_.push_back(index_list(fact_.perm[0]));
    for (int k = a; k <= b; ++k) {
      const Q& x = C.inst.data.x[k];
      points_.push_back(sgn(x) != 0 ? C.chain.ccw_point(k, x)
                                    : C.chain.graph()->vertex_point(Chain::w(k)));
      cands_.push_back(index_list(fact_.perm[k - a]));
    }
    vals_.assign(points_.size(), std::vector<Q>(pairs_.size()));
    for (size_t t = 0; t < points_.size(); ++t)
      for (size_t q = 0; q < pairs_.size(); ++q)
        vals_[t][q] = C.fam.psi(pairs_[q].first).eval(points_[t]) +
                      C.fam.psi(pairs_[q].second).eval(points_[t]);
  }

  // true: no consistent tie assignment; false: one exists or the cap was hit
  bool run() {
    bool counting = false;
    for (const auto& c : cands_)
      if (c.size() < 2) counting = true;
    fact_.reason = counting ? "counting" : "relation";
    if (counting) return true;
    chosen_.assign(points_.size(), {-1, -1});
    PotentialUF uf(static_cast<int>(pairs_.size()));
    capped_ = false;
    bool found = dfs(0, uf);
    return !found && !capped_;
  }

  WFact& fact() { return fact_; }

 private:
  std::vector<int> index_list(const std::vector<Pair>& v) {
    std::vector<int> out;
    for (const auto& I : v) out.push_back(idx_.at(I));
    return out;
  }

  bool minimal_ok(PotentialUF& uf, int t) {
    for (int u = 0; u <= t; ++u) {
      int I = chosen_[u].first;
      int root = uf.find(I);
      for (size_t K = 0; K < pairs_.size(); ++K) {
        if (uf.find(static_cast<int>(K)) != root) continue;
        // vals[u][K] + b_K >= vals[u][I] + b_I
        if (vals_[u][K] + uf.diff(I, static_cast<int>(K)) < vals_[u][I]) return false;
      }
    }
    return true;
  }

  bool dfs(size_t t, PotentialUF& uf) {
    if (t == points_.size()) return true;
    if (++fact_.nodes > kNodeCap) {
      capped_ = true;
      return true;
    }
    const auto& cs = cands_[t];
    for (size_t x = 0; x < cs.size(); ++x)
      for (size_t y = x + 1; y < cs.size(); ++y) {
        int I = cs[x], J = cs[y];
        Q c = vals_[t][I] - vals_[t][J];  // b_J - b_I
        PotentialUF next = uf;
        if (!next.unite(I, J, c)) {
          Q delta = next.diff(I, J) - c;
          if (sgn(delta) != 0) {
            note(delta);
            continue;
          }
        }
        chosen_[t] = {I, J};
        if (!minimal_ok(next, static_cast<int>(t))) continue;
        if (dfs(t + 1, next)) return true;
      }
    chosen_[t] = {-1, -1};
    return false;
  }

  void note(const Q& delta) {
    if (fact_.relations.size() >= 4) return;
    Relation rel = decode_relation(C_.chain.params(), delta);
    for (const auto& old : fact_.relations)
      if (old.coef == rel.coef && old.value == rel.value) return;
    fact_.relations.push_back(rel);
  }

  const Context& C_;
  int a_, b_;
  WFact fact_;
  std::vector<Pair> pairs_;
  std::map<Pair, int> idx_;
  std::vector<GraphPoint> points_;
  std::vector<std::vector<int>> cands_;
  std::vector<std::vector<Q>> vals_;
  std::vector<std::pair<int, int>> chosen_;
  bool capped_ = false;
};

Attempt attempt_window(const Context& C, int a, int b, long level) {
  TieSearch ts(C, a, b, level);
  Attempt out;
  out.established = ts.run();
  out.fact = ts.fact();
  return out;
}

struct DPResult {
  long e_min = 0;  // M + 1 when no value <= M is reachable
  std::vector<long> profile;
};

// Nondecreasing e(0..g) with e(0) >= 2, capped at M + 1.
DPResult run_dp(int g, long M, const std::vector<ZFact>& z, const std::vector<WFact>& w) {
  DPResult res;
  const long cap = M + 1;
  if (cap < 2) {
    res.e_min = cap;
    return res;
  }
  const int V = static_cast<int>(cap - 1);  // values 2..cap
  auto vi = [](long e) { return static_cast<int>(e - 2); };
  std::vector<std::vector<char>> zf(g + 1, std::vector<char>(V, 0));
  for (const auto& f : z)
    for (long e : f.forbidden)
      if (e <= M) zf[f.k][vi(e)] = 1;
  // wmax[b][e]: largest a - 1 among facts ending at b with level e
  std::vector<std::vector<int>> wmax(g + 1, std::vector<int>(V, -1));
  for (const auto& f : w)
    if (f.level >= 2 && f.level <= M)
      wmax[f.b][vi(f.level)] = std::max(wmax[f.b][vi(f.level)], f.a - 1);
  auto ok = [&](int k, int e, int start) {
    if (e + 2 <= M && zf[k][e]) return false;
    if (e + 2 <= M && start <= wmax[k][e]) return false;
    return true;
  };
  // reach[k][e][start], parent for backtracking
  std::vector<std::vector<std::vector<char>>> reach(
      g + 1, std::vector<std::vector<char>>(V, std::vector<char>(g + 1, 0)));
  for (int e = 0; e < V; ++e)
    if (ok(0, e, 0)) reach[0][e][0] = 1;
  for (int k = 1; k <= g; ++k) {
    std::vector<char> any_below(V + 1, 0);  // some state with value < e
    for (int e = 0; e < V; ++e) {
      bool seen = false;
      for (int st = 0; st < k; ++st) seen = seen || reach[k - 1][e][st];
      any_below[e + 1] = any_below[e] || seen;
    }
    for (int e = 0; e < V; ++e) {
      for (int st = 0; st < k; ++st)
        if (reach[k - 1][e][st] && ok(k, e, st)) reach[k][e][st] = 1;
      if (any_below[e] && ok(k, e, k)) reach[k][e][k] = 1;
    }
  }
  int best = -1, best_st = -1;
  for (int e = 0; e < V && best < 0; ++e)
    for (int st = 0; st <= g; ++st)
      if (reach[g][e][st]) {
        best = e;
        best_st = st;
        break;
      }
  if (best < 0 || best + 2 > M) {
    res.e_min = cap;
    return res;
  }
  res.e_min = best + 2;
  // Backtrack a profile.
  res.profile.assign(g + 1, 0);
  int e = best, st = best_st;
  for (int k = g; k >= 0; --k) {
    res.profile[k] = e + 2;
    if (k == 0) break;
    if (st < k) continue;  // run continues to the left with the same value
    // st == k: previous value is smaller
    bool done = false;
    for (int pe = 0; pe < e && !done; ++pe)
      for (int pst = 0; pst < k; ++pst)
        if (reach[k - 1][pe][pst]) {
          e = pe;
          st = pst;
          done = true;
          break;
        }
  }
  return res;
}

std::vector<std::tuple<int, int, long, bool>> candidate_windows(const DPResult& dp,
                                                                const InstanceMeta& meta,
                                                                long M) {
  // constant runs of the profile, as [u, v] with value L
  std::vector<std::tuple<int, int, long, bool>> out;
  const int g = static_cast<int>(dp.profile.size()) - 1;
  std::vector<std::tuple<int, int, long>> runs;
  for (int u = 0; u <= g;) {
    int v = u;
    while (v + 1 <= g && dp.profile[v + 1] == dp.profile[u]) ++v;
    if (dp.profile[u] <= M) runs.push_back({u, v, dp.profile[u]});
    u = v + 1;
  }
  for (auto [u, v, L] : runs) {
    for (const Window& w : meta.schedule)
      if (w.level == L && w.a - 1 >= u && w.b <= v && w.a <= w.b)
        out.push_back({static_cast<int>(w.a), static_cast<int>(w.b), L, true});
  }
  for (auto [u, v, L] : runs)
    for (int len = 0; len < v - u; ++len)
      for (int a = u + 1; a + len <= v; ++a) out.push_back({a, a + len, L, false});
  return out;
}

}  // namespace

MrcCertificate certify_instance(const MrcInstance& inst) {
  Context C(inst);
  MrcCertificate cert;
  cert.g = inst.g;
  cert.r = inst.r;
  cert.d = inst.d;
  cert.m = 2;
  cert.rho = rho(inst.g, inst.r, inst.d);
  cert.s = s_param(inst.g, inst.r, inst.d);
  cert.M = C.M;
  cert.A = inst.A;
  cert.data = inst.data;
  cert.meta = inst.meta;
  if (cert.rho == 0) cert.branch = cert.r <= 2 * cert.s ? "injective" : "surjective";
  else cert.branch = inst.meta.kind;
  cert.z = slope_facts(C);

  std::set<std::tuple<int, int, long>> tried;
  for (int iter = 0; iter < 100000; ++iter) {
    DPResult dp = run_dp(C.g, C.M, cert.z, cert.w);
    if (dp.profile.empty()) {
      cert.certified = true;
      cert.e_min = dp.e_min;
      break;
    }
    bool added = false;
    for (auto [a, b, L, sched] : candidate_windows(dp, inst.meta, C.M)) {
      if (!tried.insert({a, b, L}).second) continue;
      Attempt at = attempt_window(C, a, b, L);
      if (!at.established) continue;
      at.fact.scheduled = sched;
      cert.w.push_back(std::move(at.fact));
      added = true;
      break;
    }
    if (!added) {
      cert.certified = false;
      cert.e_min = dp.e_min;
      cert.counter_profile = dp.profile;
      break;
    }
  }
  cert.ledger = 2 * cert.g + 2 + cert.e_min;
  return cert;
}

MrcCertificate certify_mrc(long g, long r, long d) {
  if (r < 3) throw std::invalid_argument("certify_mrc needs r >= 3");
  if (rho(g, r, d) < 0) throw std::invalid_argument("certify_mrc needs rho >= 0");
  if (s_param(g, r, d) < 1) throw std::invalid_argument("certify_mrc needs d < g + r");
  return certify_instance(build_instance(g, r, d));
}

bool verify_mrc(const MrcCertificate& c, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  MrcInstance inst;
  try {
    inst = build_instance(c.g, c.r, c.d);
  } catch (const std::exception& e) {
    return fail(std::string("instance: ") + e.what());
  }
  if (!(inst.data == c.data)) return fail("divisor data differs from the construction");
  if (inst.A != c.A) return fail("pair set differs from the construction");
  Z want = std::min(binom(c.r + 2, 2), Z(2 * c.d - c.g + 1));
  if (Z(static_cast<long>(c.A.size())) != want) return fail("pair set has the wrong size");
  Context C(inst);
  if (C.M != c.M) return fail("bound M differs");
  auto z = slope_facts(C);
  if (z.size() != c.z.size()) return fail("slope facts differ");
  for (size_t q = 0; q < z.size(); ++q)
    if (z[q].k != c.z[q].k || z[q].forbidden != c.z[q].forbidden)
      return fail("slope fact on bridge " + std::to_string(z[q].k) + " differs");
  for (const auto& w : c.w) {
    if (w.a < 1 || w.b > c.g || w.a > w.b) return fail("window out of range");
    Attempt at = attempt_window(C, w.a, w.b, w.level);
    if (at.fact.perm != w.perm) return fail("permissibility table differs on a window");
    if (!at.established)
      return fail("window [" + std::to_string(w.a) + "," + std::to_string(w.b) + "] not established");
  }
  DPResult dp = run_dp(C.g, C.M, c.z, c.w);
  bool closed = dp.profile.empty();
  if (closed != c.certified) return fail("certified flag does not match the profile search");
  if (dp.e_min != c.e_min) return fail("e_min differs");
  return true;
}

LowDegreeCertificate low_degree_certify(long g, long r, long d, long m) {
  if (m < 1) throw std::invalid_argument("m must be positive");
  if (m * d >= 2 * g + 4) throw std::invalid_argument("low degree certificate needs md < 2g + 4");
  generic_vertex_avoiding(g, r, d, m);  // throws when no such class exists
  LowDegreeCertificate c;
  c.g = g;
  c.r = r;
  c.d = d;
  c.m = m;
  c.md = m * d;
  c.floor = 2 * g + 4;
  c.certified = c.md < c.floor;
  return c;
}

std::vector<std::vector<int>> multisets(int r, int m) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int lo) -> void {
    if (static_cast<int>(cur.size()) == m) {
      out.push_back(cur);
      return;
    }
    for (int i = lo; i <= r; ++i) {
      cur.push_back(i);
      self(self, i);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

}  // namespace troplin
