#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "helpers.hpp"

using namespace troplin;

namespace {

PLFunction tent() {
  GraphPtr g = segment_graph(2);
  return PLFunction::from_breakpoints(g, {EdgeFn{{0, 1, 2}, {0, 1, 0}, {}}});
}

}  // namespace

TEST_CASE("constant function has zero divisor") {
  auto g = k4_graph();
  CHECK(divisor_of_function(PLFunction::constant(g, 7)).empty());
}

TEST_CASE("tent function on a segment") {
  PLFunction psi = tent();
  Divisor d = divisor_of_function(psi);
  const auto& g = psi.graph();
  CHECK(d.at({0, 1}) == 2);
  CHECK(d.at(g.vertex_point(0)) == -1);
  CHECK(d.at(g.vertex_point(1)) == -1);
  CHECK(d.degree() == 0);
}

TEST_CASE("breakpoint validation") {
  GraphPtr g = segment_graph(2);
  CHECK_THROWS(PLFunction::from_breakpoints(g, {EdgeFn{{0, 2}, {0, 1}, {}}}));
  CHECK_THROWS(PLFunction::from_breakpoints(g, {EdgeFn{{0, 1, 1, 2}, {0, 1, 1, 0}, {}}}));
  auto th = theta_graph();
  std::vector<EdgeFn> p{EdgeFn{{0, 1}, {0, 1}, {}}, EdgeFn{{0, 1}, {0, 1}, {}},
                        EdgeFn{{0, 1}, {0, 2}, {}}};
  CHECK_THROWS(PLFunction::from_breakpoints(th, p));
}

TEST_CASE("equal slopes are merged") {
  GraphPtr g = segment_graph(3);
  PLFunction f = PLFunction::from_breakpoints(g, {EdgeFn{{0, 1, 2, 3}, {0, 1, 2, 3}, {}}});
  CHECK(f.on_edge(0).x.size() == 2);
  CHECK(f.on_edge(0).slope == std::vector<long>{1});
}

TEST_CASE("canonical divisors") {
  auto circ = circle_graph({Q(3)});
  CHECK(canonical_divisor(*circ).empty());
  auto k4 = k4_graph();
  Divisor K = canonical_divisor(*k4);
  for (int v = 0; v < 4; ++v) CHECK(K.at(k4->vertex_point(v)) == 1);
  CHECK(K.degree() == 4);
  CHECK(K.degree() == 2 * k4->betti() - 2);
  auto pet = petersen_graph();
  CHECK(canonical_divisor(*pet).degree() == 2 * 6 - 2);
}

TEST_CASE("min locus") {
  auto k4 = k4_graph();
  Subgraph all = min_locus(PLFunction::constant(k4, 0));
  CHECK(all.full_edges().size() == 6);
  CHECK(all.is_union_of_edges());
  PLFunction t = plf_scale(tent(), -1);
  Subgraph s = min_locus(t);
  CHECK(s.contains({0, 1}));
  CHECK_FALSE(s.contains({0, Q(1, 2)}));
  CHECK(s.intervals(0).size() == 1);
  CHECK(s.outdeg({0, 1}) == 2);
  CHECK(s.vertices().empty());
}

TEST_CASE("add, scale, min identities") {
  std::mt19937 rng(7);
  for (int it = 0; it < 50; ++it) {
    auto g = testkit::random_graph(rng);
    PLFunction a = testkit::random_function(rng, g);
    PLFunction b = testkit::random_function(rng, g);
    CHECK(plf_add(a, PLFunction::constant(g, 0)) == a);
    CHECK(plf_min(a, plf_shift(a, 1)) == a);
    CHECK(plf_add(a, b) == plf_add(b, a));
    CHECK(plf_min(a, b) == plf_min(b, a));
    CHECK(divisor_of_function(plf_add(a, b)) ==
          divisor_of_function(a) + divisor_of_function(b));
    CHECK(divisor_of_function(plf_scale(a, 3)) == divisor_of_function(a).scaled(3));
  }
}

TEST_CASE("mismatched graphs are rejected") {
  auto g1 = k4_graph();
  auto g2 = k4_graph();
  CHECK_THROWS(plf_add(PLFunction::constant(g1, 0), PLFunction::constant(g2, 0)));
}

TEST_CASE("shape audit on a single function") {
  std::mt19937 rng(3);
  auto g = k4_graph();
  PLFunction f = testkit::random_function(rng, g);
  Divisor D = divisor_of_function(f).scaled(-1);
  ShapeReport r = shape_lemma_audit(D, {f}, f);
  CHECK(r.ok());
}

TEST_CASE("shape audit on two tents") {
  GraphPtr g = segment_graph(4);
  PLFunction a = PLFunction::from_breakpoints(g, {EdgeFn{{0, 1, 4}, {0, 1, -2}, {}}});
  PLFunction b = PLFunction::from_breakpoints(g, {EdgeFn{{0, 3, 4}, {-2, 1, 0}, {}}});
  Divisor D;
  D.add(g->vertex_point(0), 1);
  D.add(g->vertex_point(1), 1);
  CHECK((D + divisor_of_function(a)).effective());
  CHECK((D + divisor_of_function(b)).effective());
  PLFunction theta = plf_min(a, b);
  ShapeReport r = shape_lemma_audit(D, {a, b}, theta);
  CHECK(r.ok());
  bool saw_boundary = false;
  for (const auto& w : r.witnesses) saw_boundary |= w.boundary;
  CHECK(saw_boundary);
}

TEST_CASE("outdegree bound") {
  PLFunction t = plf_scale(tent(), -1);
  Divisor D = divisor_of_function(t).scaled(-1);
  CHECK(outdegree_bound_holds(t, D + divisor_of_function(t).scaled(0)));
  Divisor small;
  small.add(t.graph().vertex_point(0), 1);
  small.add(t.graph().vertex_point(1), 1);
  CHECK_FALSE(outdegree_bound_holds(t, small));
}
