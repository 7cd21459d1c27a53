#include "troplin/io.hpp"

#include <sstream>
#include <stdexcept>

namespace troplin {

json q_json(const Q& q) { return q_to_string(q); }

Q q_parse(const json& j) {
  if (j.is_string()) return q_from_string(j.get<std::string>());
  if (j.is_number_integer()) return Q(j.get<long>());
  throw std::invalid_argument("rational must be a \"p/q\" string or an integer");
}

namespace {

json q_list(const std::vector<Q>& v) {
  json a = json::array();
  for (const auto& q : v) a.push_back(q_json(q));
  return a;
}

std::vector<Q> q_list_parse(const json& j) {
  std::vector<Q> out;
  for (const auto& x : j) out.push_back(q_parse(x));
  return out;
}

json pair_json(const Pair& p) { return json::array({p.first, p.second}); }
Pair pair_parse(const json& j) { return {j.at(0).get<int>(), j.at(1).get<int>()}; }

json pairs_json(const std::vector<Pair>& v) {
  json a = json::array();
  for (const auto& p : v) a.push_back(pair_json(p));
  return a;
}

std::vector<Pair> pairs_parse(const json& j) {
  std::vector<Pair> out;
  for (const auto& x : j) out.push_back(pair_parse(x));
  return out;
}

}  // namespace

json graph_to_json(const MetricGraph& g) {
  json edges = json::array();
  for (const auto& e : g.edges()) edges.push_back({{"u", e.u}, {"v", e.v}, {"len", q_json(e.len)}});
  return {{"vertices", g.num_vertices()}, {"edges", edges}};
}

GraphPtr graph_from_json(const json& j) {
  std::vector<Edge> edges;
  for (const auto& e : j.at("edges"))
    edges.push_back({e.at("u").get<int>(), e.at("v").get<int>(), q_parse(e.at("len"))});
  return make_graph(j.at("vertices").get<int>(), std::move(edges));
}

json point_to_json(const GraphPoint& p) { return {{"edge", p.edge}, {"t", q_json(p.t)}}; }

GraphPoint point_from_json(const json& j) { return {j.at("edge").get<int>(), q_parse(j.at("t"))}; }

json divisor_to_json(const Divisor& D) {
  json a = json::array();
  for (const auto& [p, n] : D.terms()) a.push_back({{"point", point_to_json(p)}, {"mult", n}});
  return a;
}

Divisor divisor_from_json(const json& j) {
  Divisor D;
  for (const auto& t : j) D.add(point_from_json(t.at("point")), t.at("mult").get<long>());
  return D;
}

json plf_to_json(const PLFunction& f) {
  json pieces = json::array();
  for (const auto& e : f.pieces())
    pieces.push_back({{"x", q_list(e.x)}, {"y", q_list(e.y)}, {"slope", e.slope}});
  return {{"pieces", pieces}};
}

PLFunction plf_from_json(GraphPtr g, const json& j) {
  std::vector<EdgeFn> pieces;
  for (const auto& p : j.at("pieces")) {
    EdgeFn e;
    e.x = q_list_parse(p.at("x"));
    e.y = q_list_parse(p.at("y"));
    e.slope = p.at("slope").get<std::vector<long>>();
    pieces.push_back(std::move(e));
  }
  return PLFunction::from_breakpoints(std::move(g), std::move(pieces));
}

json chain_to_json(const ChainParams& p) {
  return {{"g", p.g}, {"mbar", p.mbar}, {"ell", q_list(p.ell)}, {"m", q_list(p.m)},
          {"n", q_list(p.n)}, {"trusted", p.trusted}};
}

ChainParams chain_from_json(const json& j) {
  ChainParams p;
  p.g = j.at("g").get<int>();
  p.mbar = j.at("mbar").get<long>();
  p.ell = q_list_parse(j.at("ell"));
  p.m = q_list_parse(j.at("m"));
  p.n = q_list_parse(j.at("n"));
  p.trusted = j.value("trusted", false);
  const size_t g = static_cast<size_t>(p.g);
  if (p.ell.size() != g + 1 || p.m.size() != g + 1 || p.n.size() != g + 1)
    throw std::invalid_argument("chain: ell, m and n need g + 1 entries");
  return p;
}

json data_to_json(const DivisorData& d) { return {{"d0", d.d0}, {"x", q_list(d.x)}}; }

DivisorData data_from_json(const json& j) {
  DivisorData d;
  d.d0 = j.at("d0").get<long>();
  d.x = q_list_parse(j.at("x"));
  return d;
}

json path_to_json(const LingeringPath& p) {
  json steps = json::array();
  for (size_t i = 1; i < p.steps.size(); ++i) {
    const Step& s = p.steps[i];
    if (s.kind == StepKind::Dir) steps.push_back({{"kind", "dir"}, {"dir", s.dir}});
    else steps.push_back({{"kind", s.kind == StepKind::Down ? "down" : "linger"}});
  }
  return {{"r", p.r}, {"p", p.p}, {"steps", steps}, {"in_chamber", p.in_chamber},
          {"lingering", p.lingering_count()}};
}

json tableau_to_json(const Tableau& t) { return {{"r", t.r}, {"s", t.s}, {"rows", t.rows}}; }

Tableau tableau_from_json(const json& j) {
  Tableau t;
  t.r = j.at("r").get<int>();
  t.s = j.at("s").get<int>();
  t.rows = j.at("rows").get<std::vector<std::vector<int>>>();
  return t;
}

json family_to_json(const Family& f) {
  json fs = json::array();
  for (size_t i = 0; i < f.funcs.size(); ++i) {
    json e = plf_to_json(f.funcs[i]);
    if (i < f.labels.size()) e["label"] = f.labels[i];
    fs.push_back(e);
  }
  return {{"graph", graph_to_json(*f.graph)}, {"functions", fs}};
}

Family family_from_json(const json& j) {
  Family f;
  f.graph = graph_from_json(j.at("graph"));
  for (const auto& e : j.at("functions")) {
    f.funcs.push_back(plf_from_json(f.graph, e));
    f.labels.push_back(e.value("label", std::to_string(f.labels.size())));
  }
  return f;
}

json combination_to_json(const Combination& b) { return q_list(b); }
Combination combination_from_json(const json& j) { return q_list_parse(j); }

json trace_to_json(const DependenceTrace& t) {
  json nodes = json::array();
  for (const auto& n : t.nodes) {
    json br = json::array();
    for (const auto& b : n.branches) br.push_back({b.pattern, b.child});
    nodes.push_back({{"cell", n.cell}, {"branches", br}});
  }
  return {{"cells", t.cells}, {"distinct", t.distinct}, {"feasibility_calls", t.feasibility_calls},
          {"nodes", nodes}};
}

DependenceTrace trace_from_json(const json& j) {
  DependenceTrace t;
  t.cells = j.at("cells").get<long>();
  t.distinct = j.at("distinct").get<long>();
  t.feasibility_calls = j.at("feasibility_calls").get<long>();
  for (const auto& n : j.at("nodes")) {
    SearchNode node;
    node.cell = n.at("cell").get<int>();
    for (const auto& b : n.at("branches")) node.branches.push_back({b.at(0).get<int>(), b.at(1).get<int>()});
    t.nodes.push_back(std::move(node));
  }
  return t;
}

json pairset_to_json(const PairSet& A) {
  json ex = json::array();
  for (const auto& [p, r] : A.excluded) ex.push_back({{"pair", pair_json(p)}, {"region", region_name(r)}});
  return {{"g", A.g}, {"r", A.r}, {"d", A.d}, {"s", A.s}, {"size", A.kept.size()},
          {"kept", pairs_json(A.kept)}, {"excluded", ex}};
}

json relation_to_json(const Relation& r) {
  return {{"coef", r.coef}, {"value", q_json(r.value)}, {"small", r.small}, {"cycle", r.cycle},
          {"text", r.to_string()}};
}

Relation relation_from_json(const json& j) {
  Relation r;
  r.coef = j.at("coef").get<std::vector<long>>();
  r.value = q_parse(j.at("value"));
  r.small = j.at("small").get<bool>();
  r.cycle = j.at("cycle").get<std::vector<int>>();
  return r;
}

namespace {

json window_json(const Window& w) {
  return {{"l", w.l}, {"a", w.a}, {"b", w.b}, {"level", w.level}};
}

Window window_parse(const json& j) {
  Window w;
  w.l = j.at("l").get<long>();
  w.a = j.at("a").get<long>();
  w.b = j.at("b").get<long>();
  w.level = j.at("level").get<long>();
  return w;
}

}  // namespace

json mrc_to_json(const MrcCertificate& c) {
  json z = json::array();
  for (const auto& f : c.z) z.push_back({{"k", f.k}, {"forbidden", f.forbidden}});
  json w = json::array();
  for (const auto& f : c.w) {
    json perm = json::array();
    for (const auto& p : f.perm) perm.push_back(pairs_json(p));
    json rels = json::array();
    for (const auto& r : f.relations) rels.push_back(relation_to_json(r));
    w.push_back({{"a", f.a}, {"b", f.b}, {"level", f.level}, {"scheduled", f.scheduled},
                 {"reason", f.reason}, {"perm", perm}, {"nodes", f.nodes}, {"relations", rels}});
  }
  json sched = json::array();
  for (const auto& x : c.meta.schedule) sched.push_back(window_json(x));
  json meta = {{"kind", c.meta.kind}, {"nu", c.meta.nu}, {"nu1", c.meta.nu1}, {"nu2", c.meta.nu2},
               {"eta", c.meta.eta}, {"alpha", c.meta.alpha}, {"inserted", c.meta.inserted},
               {"schedule", sched}};
  return {{"kind", "mrc"}, {"g", c.g}, {"r", c.r}, {"d", c.d}, {"m", c.m}, {"rho", c.rho},
          {"s", c.s}, {"M", c.M}, {"branch", c.branch}, {"A", pairs_json(c.A)},
          {"data", data_to_json(c.data)}, {"meta", meta}, {"slope_facts", z}, {"window_facts", w},
          {"certified", c.certified}, {"e_min", c.e_min}, {"ledger", c.ledger},
          {"counter_profile", c.counter_profile}};
}

MrcCertificate mrc_from_json(const json& j) {
  MrcCertificate c;
  c.g = j.at("g").get<long>();
  c.r = j.at("r").get<long>();
  c.d = j.at("d").get<long>();
  c.m = j.at("m").get<long>();
  c.rho = j.at("rho").get<long>();
  c.s = j.at("s").get<long>();
  c.M = j.at("M").get<long>();
  c.branch = j.at("branch").get<std::string>();
  c.A = pairs_parse(j.at("A"));
  c.data = data_from_json(j.at("data"));
  const json& meta = j.at("meta");
  c.meta.kind = meta.at("kind").get<std::string>();
  c.meta.nu = meta.at("nu").get<long>();
  c.meta.nu1 = meta.at("nu1").get<long>();
  c.meta.nu2 = meta.at("nu2").get<long>();
  c.meta.eta = meta.at("eta").get<long>();
  c.meta.alpha = meta.at("alpha").get<std::vector<long>>();
  c.meta.inserted = meta.at("inserted").get<std::vector<int>>();
  for (const auto& x : meta.at("schedule")) c.meta.schedule.push_back(window_parse(x));
  for (const auto& f : j.at("slope_facts")) {
    ZFact z;
    z.k = f.at("k").get<int>();
    z.forbidden = f.at("forbidden").get<std::vector<long>>();
    c.z.push_back(z);
  }
  for (const auto& f : j.at("window_facts")) {
    WFact w;
    w.a = f.at("a").get<int>();
    w.b = f.at("b").get<int>();
    w.level = f.at("level").get<long>();
    w.scheduled = f.at("scheduled").get<bool>();
    w.reason = f.at("reason").get<std::string>();
    for (const auto& p : f.at("perm")) w.perm.push_back(pairs_parse(p));
    w.nodes = f.at("nodes").get<long>();
    for (const auto& r : f.at("relations")) w.relations.push_back(relation_from_json(r));
    c.w.push_back(std::move(w));
  }
  c.certified = j.at("certified").get<bool>();
  c.e_min = j.at("e_min").get<long>();
  c.ledger = j.at("ledger").get<long>();
  c.counter_profile = j.at("counter_profile").get<std::vector<long>>();
  return c;
}

json noether_to_json(const MetricGraph& g, const NoetherCertificate& c) {
  json entries = json::array();
  for (const auto& e : c.entries)
    entries.push_back({{"edge", e.edge}, {"path1", e.loops.path1}, {"path2", e.loops.path2},
                       {"psi", plf_to_json(e.psi)}, {"locus_is_edge", e.locus_is_edge},
                       {"in_2K", e.in_2K}});
  json out = {{"kind", "noether"}, {"graph", graph_to_json(g)}, {"genus", c.genus},
              {"entries", entries}, {"count_ok", c.count_ok}, {"distinct", c.distinct},
              {"certified", c.certified}};
  if (c.brute) out["brute"] = verdict_name(*c.brute);
  return out;
}

NoetherCertificate noether_from_json(GraphPtr g, const json& j) {
  NoetherCertificate c;
  c.genus = j.at("genus").get<int>();
  for (const auto& e : j.at("entries")) {
    int edge = e.at("edge").get<int>();
    auto p1 = e.at("path1").get<std::vector<int>>();
    auto p2 = e.at("path2").get<std::vector<int>>();
    auto loop = [&](std::vector<int> p) {
      p.push_back(edge);
      return Subgraph::from_edges(g, p);
    };
    NoetherEntry en{edge, LoopPair{edge, p1, p2, loop(p1), loop(p2)}, plf_from_json(g, e.at("psi")),
                    e.at("locus_is_edge").get<bool>(), e.at("in_2K").get<bool>()};
    c.entries.push_back(std::move(en));
  }
  c.count_ok = j.at("count_ok").get<bool>();
  c.distinct = j.at("distinct").get<bool>();
  c.certified = j.at("certified").get<bool>();
  if (j.contains("brute")) {
    std::string v = j.at("brute").get<std::string>();
    c.brute = v == "dependent" ? Verdict::Dependent
              : v == "independent" ? Verdict::Independent
                                   : Verdict::Undecided;
  }
  return c;
}

json low_degree_to_json(const LowDegreeCertificate& c) {
  return {{"kind", "low-degree"}, {"g", c.g}, {"r", c.r}, {"d", c.d}, {"m", c.m},
          {"md", c.md}, {"floor", c.floor}, {"certified", c.certified}};
}

json dependence_certificate(const Family& f, const DependenceOutcome& out) {
  json j = {{"kind", "dependence"}, {"family", family_to_json(f)},
            {"verdict", verdict_name(out.verdict)}, {"trace", trace_to_json(out.trace)}};
  if (out.verdict == Verdict::Dependent) j["witness"] = combination_to_json(out.witness);
  return j;
}

bool verify_certificate(const json& j, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "dependence") {
      Family f = family_from_json(j.at("family"));
      const std::string v = j.at("verdict").get<std::string>();
      if (v == "dependent") {
        Combination b = combination_from_json(j.at("witness"));
        if (b.size() != f.funcs.size()) return fail("witness size differs from family size");
        if (!verify_twice(f.funcs, b).holds) return fail("witness does not attain the minimum twice");
        return true;
      }
      if (v == "independent") return replay_independence(f.funcs, trace_from_json(j.at("trace")), why);
      return fail("undecided outcome carries no certificate");
    }
    if (kind == "mrc") {
      MrcCertificate c = mrc_from_json(j);
      if (!c.certified) return fail("certificate is not marked certified");
      return verify_mrc(c, why);
    }
    if (kind == "noether") {
      GraphPtr g = graph_from_json(j.at("graph"));
      return verify_noether(g, noether_from_json(g, j), why);
    }
    if (kind == "low-degree") {
      LowDegreeCertificate c = low_degree_certify(j.at("g").get<long>(), j.at("r").get<long>(),
                                                  j.at("d").get<long>(), j.at("m").get<long>());
      if (c.certified != j.at("certified").get<bool>()) return fail("certified flag differs");
      return c.certified || fail("not certified");
    }
    return fail("unknown certificate kind: " + kind);
  } catch (const std::exception& e) {
    return fail(std::string("malformed certificate: ") + e.what());
  }
}

std::string chain_dot(const Chain& c, const DivisorData& d) {
  std::ostringstream os;
  const int g = c.genus();
  os << "graph chain {\n  rankdir=LR;\n  node [shape=point];\n";
  os << "  w0 [shape=circle, style=filled, label=\"" << d.d0 << "\", width=0.3];\n";
  for (int k = 1; k <= g; ++k) {
    os << "  v" << k << "; w" << k << ";\n";
    os << "  w" << (k - 1) << " -- v" << k << " [label=\"bridge " << (k - 1) << "\"];\n";
    os << "  v" << k << " -- w" << k << " [label=\"m" << k << "\"];\n";
    os << "  w" << k << " -- v" << k << " [label=\"top " << k << "\"];\n";
    if (sgn(d.x[k]) != 0)
      os << "  chip" << k << " [shape=circle, style=filled, fillcolor=black, width=0.15, xlabel=\""
         << q_to_string(d.x[k]) << "\"];\n  v" << k << " -- chip" << k << " [style=dotted];\n";
  }
  os << "  v" << (g + 1) << ";\n  w" << g << " -- v" << (g + 1) << " [label=\"bridge " << g << "\"];\n";
  os << "}\n";
  return os.str();
}

std::string pairset_dot(const PairSet& A) {
  std::ostringstream os;
  os << "graph pairs {\n  node [shape=circle, width=0.3, fixedsize=true];\n";
  for (const auto& p : A.kept)
    os << "  p" << p.first << "_" << p.second << " [style=filled, fillcolor=black, pos=\"" << p.first
       << "," << p.second << "!\", label=\"\"];\n";
  for (const auto& [p, r] : A.excluded)
    os << "  p" << p.first << "_" << p.second << " [pos=\"" << p.first << "," << p.second
       << "!\", label=\"\", tooltip=\"" << region_name(r) << "\"];\n";
  os << "}\n";
  return os.str();
}

}  // namespace troplin
