#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "helpers.hpp"
#include "troplin/io.hpp"

using namespace troplin;

namespace {

json reparse(const json& j) { return json::parse(j.dump()); }

Family genus4_family() {
  Chain c(make_admissible_chain(4, 2));
  Tableau t;
  t.r = 3;
  t.s = 1;
  t.rows = {{1, 2, 3, 4}};
  CanonicalFamily fam(c, tableau_to_divisor(t, c, 6), 3);
  Family f;
  f.graph = c.graph();
  for (const auto& I : multisets(3, 2)) {
    f.funcs.push_back(fam.psi_multiset(I));
    f.labels.push_back(std::to_string(I[0]) + std::to_string(I[1]));
  }
  return f;
}

}  // namespace

TEST_CASE("rational wire format") {
  CHECK(q_json(qq(-3, 6)) == "-1/2");
  CHECK(q_json(Q(4)) == "4/1");
  CHECK(q_parse(json("6/4")) == qq(3, 2));
  CHECK(q_parse(json(7)) == Q(7));
  CHECK_THROWS(q_parse(json(0.5)));
}

TEST_CASE("graphs, divisors and functions round-trip") {
  std::mt19937 rng(20261016);
  for (int trial = 0; trial < 1000; ++trial) {
    GraphPtr g = testkit::random_graph(rng);
    GraphPtr h = graph_from_json(reparse(graph_to_json(*g)));
    REQUIRE(h->num_vertices() == g->num_vertices());
    REQUIRE(h->num_edges() == g->num_edges());
    for (int e = 0; e < g->num_edges(); ++e) {
      CHECK(h->edge(e).u == g->edge(e).u);
      CHECK(h->edge(e).v == g->edge(e).v);
      CHECK(h->edge(e).len == g->edge(e).len);
    }
    Divisor D = testkit::random_divisor(rng, g, 4, -2, 3, 2);
    CHECK(divisor_from_json(reparse(divisor_to_json(D))) == D);
    PLFunction f = testkit::random_function(rng, g);
    PLFunction f2 = plf_from_json(g, reparse(plf_to_json(f)));
    CHECK(f2 == f);
    CHECK(plf_to_json(f2) == plf_to_json(f));
  }
}

TEST_CASE("chain data round-trip") {
  ChainParams p = make_admissible_chain(6, 2);
  ChainParams p2 = chain_from_json(reparse(chain_to_json(p)));
  CHECK(p2.ell == p.ell);
  CHECK(p2.m == p.m);
  CHECK(p2.n == p.n);
  CHECK(p2.mbar == p.mbar);
  json short_chain = chain_to_json(p);
  short_chain["m"].erase(0);
  CHECK_THROWS(chain_from_json(short_chain));

  MrcInstance inst = build_instance(10, 4, 12);
  CHECK(data_from_json(reparse(data_to_json(inst.data))) == inst.data);
  Chain c(inst.params);
  LingeringPath path = lingering_path(c, inst.data, 4);
  json pj = path_to_json(path);
  CHECK(pj["p"][4] == json({6, 5, 2, 1}));
  Tableau t = path_to_tableau(path, 2);
  CHECK(tableau_from_json(reparse(tableau_to_json(t))) == t);
}

TEST_CASE("dependence certificates") {
  Family f = genus4_family();
  Family f2 = family_from_json(reparse(family_to_json(f)));
  REQUIRE(f2.funcs.size() == f.funcs.size());
  for (size_t i = 0; i < f.funcs.size(); ++i) CHECK(plf_to_json(f2.funcs[i]) == plf_to_json(f.funcs[i]));
  CHECK(f2.labels == f.labels);

  DependenceOutcome dep = decide_dependence(f.funcs, default_budget());
  REQUIRE(dep.verdict == Verdict::Dependent);
  json cert = reparse(dependence_certificate(f, dep));
  std::string why;
  CHECK_MESSAGE(verify_certificate(cert, &why), why);
  json bad = cert;
  for (size_t k = 1; k < bad["witness"].size(); ++k) bad["witness"][k] = "1000000/1";
  CHECK_FALSE(verify_certificate(bad));

  Family sub = f;
  auto drop = std::find(sub.labels.begin(), sub.labels.end(), "11") - sub.labels.begin();
  sub.funcs.erase(sub.funcs.begin() + drop);
  sub.labels.erase(sub.labels.begin() + drop);
  DependenceOutcome ind = decide_dependence(sub.funcs, default_budget());
  REQUIRE(ind.verdict == Verdict::Independent);
  json icert = reparse(dependence_certificate(sub, ind));
  CHECK(trace_to_json(trace_from_json(icert["trace"])) == icert["trace"]);
  CHECK_MESSAGE(verify_certificate(icert, &why), why);
  json cut = icert;
  cut["trace"]["nodes"][0]["branches"].erase(0);
  CHECK_FALSE(verify_certificate(cut));
  json undecided = icert;
  undecided["verdict"] = "undecided";
  CHECK_FALSE(verify_certificate(undecided));
}

TEST_CASE("mrc certificates") {
  for (auto [g, r, d] : std::vector<std::array<long, 3>>{{10, 4, 12}, {9, 3, 11}, {36, 11, 44}}) {
    MrcCertificate c = certify_mrc(g, r, d);
    json j = reparse(mrc_to_json(c));
    CHECK(mrc_to_json(mrc_from_json(j)) == j);
    std::string why;
    CHECK_MESSAGE(verify_certificate(j, &why), why);
    json bad = j;
    bad["window_facts"] = json::array();
    bad["slope_facts"] = json::array();
    CHECK_FALSE(verify_certificate(bad));
    bad = j;
    bad["e_min"] = j["e_min"].get<long>() + 1;
    CHECK_FALSE(verify_certificate(bad));
  }
  json rel = relation_to_json(certify_mrc(10, 4, 12).w.at(0).relations.at(0));
  CHECK(relation_to_json(relation_from_json(rel)) == rel);
  CHECK(pairset_to_json(build_A(36, 11, 44))["size"] == 53);
  LowDegreeCertificate low = low_degree_certify(6, 1, 4, 2);
  CHECK(verify_certificate(low_degree_to_json(low)));
  json lowbad = low_degree_to_json(low);
  lowbad["d"] = 20;
  CHECK_FALSE(verify_certificate(lowbad));
}

TEST_CASE("noether certificates") {
  for (const std::string name : {"k4", "theta", "cube", "petersen"}) {
    GraphPtr g = named_graph(name, {Q(2), qq(3, 2), Q(1)});
    NoetherCertificate c = noether_certify(g);
    json j = reparse(noether_to_json(*g, c));
    CHECK(noether_to_json(*g, noether_from_json(g, j)) == j);
    std::string why;
    CHECK_MESSAGE(verify_certificate(j, &why), why);
    json bad = j;
    bad["entries"][1]["psi"] = bad["entries"][0]["psi"];
    CHECK_FALSE(verify_certificate(bad));
  }
  CHECK_FALSE(verify_certificate(json{{"kind", "unknown"}}));
  CHECK_FALSE(verify_certificate(json{{"nothing", 1}}));
}

TEST_CASE("dot output") {
  MrcInstance inst = build_instance(10, 4, 12);
  std::string dot = chain_dot(Chain(inst.params), inst.data);
  CHECK(dot.rfind("graph chain {", 0) == 0);
  CHECK(dot.find("chip5") != std::string::npos);
  std::string pd = pairset_dot(build_A(4, 3, 6));
  CHECK(pd.find("p0_3") != std::string::npos);
}
