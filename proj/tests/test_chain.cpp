#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "helpers.hpp"
#include "troplin/chain.hpp"

using namespace troplin;

namespace {

std::vector<long> full(const LingeringPath& P, int i) {
  std::vector<long> v = P.p.at(i);
  v.push_back(0);
  return v;
}

bool brute_relation(const std::vector<Q>& m, long bound) {
  const size_t g = m.size();
  std::vector<long> c(g, -bound);
  for (;;) {
    bool nonzero = std::any_of(c.begin(), c.end(), [](long x) { return x != 0; });
    if (nonzero) {
      Q s = 0;
      for (size_t i = 0; i < g; ++i) s += Q(c[i]) * m[i];
      if (s == 0) return true;
    }
    size_t k = 0;
    while (k < g && c[k] == bound) c[k++] = -bound;
    if (k == g) return false;
    ++c[k];
  }
}

Tableau canonical_tableau_g4() {
  Tableau t;
  t.r = 3;
  t.s = 1;
  t.rows = {{1, 2, 3, 4}};
  return t;
}

}  // namespace

TEST_CASE("admissible constructor") {
  ChainParams p = make_admissible_chain(1, 2);
  CHECK(p.m[1] == 1);
  CHECK(p.ell[1] == 21);
  CHECK(p.n[0] == 105);
  CHECK(p.n[1] == 105);
  CHECK(check_admissible(p).ok());
  ChainParams p4 = make_admissible_chain(4, 2);
  CHECK(p4.m[1] == 1);
  CHECK(p4.m[2] == 11);
  CHECK(p4.m[3] == 121);
  CHECK(p4.m[4] == 1331);
  CHECK(check_admissible(p4).ok());
}

TEST_CASE("relation search agrees with brute force") {
  for (int g = 1; g <= 4; ++g) {
    ChainParams p = make_admissible_chain(g, 2);
    std::vector<Q> ms(p.m.begin() + 1, p.m.end());
    CHECK_FALSE(brute_relation(ms, g + 1));
    CHECK_FALSE(has_small_relation(ms, g + 1));
  }
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> md(1, 12);
  for (int it = 0; it < 200; ++it) {
    int g = 1 + it % 4;
    std::vector<Q> ms;
    for (int k = 0; k < g; ++k) ms.push_back(qq(md(rng), 1 + it % 3));
    CHECK(brute_relation(ms, 2) == has_small_relation(ms, 2));
  }
  ChainParams bad = make_admissible_chain(3, 2);
  bad.m[3] = bad.m[1] + bad.m[2];
  bad.trusted = false;
  CHECK_FALSE(check_admissible(bad).relation_free);
}

TEST_CASE("genus 10 golden path") {
  Chain c(make_admissible_chain(10, 2));
  DivisorData d = tableau_to_divisor(standard_tableau(4, 2), c, 12);
  LingeringPath P = lingering_path(c, d, 4);
  CHECK(full(P, 4) == std::vector<long>{6, 5, 2, 1, 0});
  CHECK(full(P, 5) == std::vector<long>{6, 5, 3, 1, 0});
  CHECK(full(P, 6) == std::vector<long>{6, 5, 4, 1, 0});
  CHECK(rank_exact(c, d) == 4);
  CHECK(degree_of(d) == 12);
  CHECK(is_vertex_avoiding(c, d, 4, 12));
}

TEST_CASE("genus 4 canonical path and reduction") {
  Chain c(make_admissible_chain(4, 2));
  DivisorData d = tableau_to_divisor(canonical_tableau_g4(), c, 6);
  LingeringPath P = lingering_path(c, d, 3);
  CHECK(full(P, 0) == std::vector<long>{3, 2, 1, 0});
  CHECK(full(P, 1) == std::vector<long>{4, 2, 1, 0});
  CHECK(full(P, 2) == std::vector<long>{4, 3, 1, 0});
  CHECK(full(P, 3) == std::vector<long>{4, 3, 2, 0});
  CHECK(full(P, 4) == std::vector<long>{3, 2, 1, 0});
  auto G = c.graph();
  ReductionResult red = reduce(G, canonical_divisor(*G), G->vertex_point(Chain::w(0)));
  CHECK(c.from_divisor(red.reduced) == d);
  CHECK(path_to_tableau(P, 1) == canonical_tableau_g4());
}

TEST_CASE("canonical class has rank g-1") {
  for (int g = 1; g <= 8; ++g) {
    Chain c(make_admissible_chain(g, 2));
    auto G = c.graph();
    ReductionResult red = reduce(G, canonical_divisor(*G), G->vertex_point(Chain::w(0)));
    DivisorData d = c.from_divisor(red.reduced);
    CHECK(rank_exact(c, d) == g - 1);
  }
}

TEST_CASE("all chips at w0") {
  Chain c(make_admissible_chain(5, 2));
  DivisorData d;
  d.d0 = 7;
  d.x.assign(6, Q(0));
  LingeringPath P = lingering_path(c, d, 2);
  for (int i = 1; i <= 5; ++i) CHECK(P.steps[i].kind == StepKind::Down);
  DivisorData one;
  one.d0 = 1;
  one.x.assign(6, Q(0));
  CHECK(rank_exact(c, one) == 0);
  CHECK_FALSE(rank_at_least(c, one, 1));
}

TEST_CASE("one-column tableau") {
  Chain c(make_admissible_chain(3, 2));
  Tableau t;
  t.r = 0;
  t.s = 3;
  t.rows = {{1}, {2}, {3}};
  DivisorData d = tableau_to_divisor(t, c, 0);
  CHECK(d.d0 == 0);
  LingeringPath P = lingering_path(c, d, 0);
  for (int i = 1; i <= 3; ++i) CHECK(P.steps[i].kind == StepKind::Down);
}

TEST_CASE("non-standard tableau is rejected") {
  Chain c(make_admissible_chain(4, 2));
  Tableau t = canonical_tableau_g4();
  std::swap(t.rows[0][0], t.rows[0][1]);
  CHECK_THROWS(tableau_to_divisor(t, c, 6));
}

TEST_CASE("tableau round trip on random rectangular tableaux") {
  std::mt19937 rng(17);
  for (int it = 0; it < 60; ++it) {
    int r = 1 + it % 4, s = 1 + (it / 4) % 3;
    int g = (r + 1) * s;
    // random linear extension of the rectangle poset
    std::vector<int> filled(r + 1, 0);
    Tableau t;
    t.r = r;
    t.s = s;
    t.rows.assign(s, std::vector<int>(r + 1));
    for (int v = 1; v <= g; ++v) {
      std::vector<int> ok;
      for (int col = 0; col <= r; ++col)
        if (filled[col] < s && (col == 0 || filled[col - 1] > filled[col])) ok.push_back(col);
      int col = ok[std::uniform_int_distribution<size_t>(0, ok.size() - 1)(rng)];
      t.rows[filled[col]++][col] = v;
    }
    REQUIRE(is_standard(t, g));
    Chain c(make_admissible_chain(g, 2));
    long d = g + r - s;
    DivisorData data = tableau_to_divisor(t, c, d);
    LingeringPath P = lingering_path(c, data, r);
    CHECK(P.in_chamber);
    CHECK(P.lingering_count() == 0);
    CHECK(path_to_tableau(P, s) == t);
    CHECK(is_vertex_avoiding(c, data, r, d));
  }
}

TEST_CASE("vertex avoiding bullets") {
  Chain c(make_admissible_chain(4, 2));
  DivisorData d = tableau_to_divisor(canonical_tableau_g4(), c, 6);
  CHECK(is_vertex_avoiding(c, d, 3, 6));
  DivisorData bad = d;
  bad.x[2] = c.params().m[2];
  CHECK_FALSE(is_vertex_avoiding(c, bad, 3, 6));
}

TEST_CASE("canonical representatives for genus 4") {
  Chain c(make_admissible_chain(4, 2));
  DivisorData d = tableau_to_divisor(canonical_tableau_g4(), c, 6);
  CanonicalFamily fam(c, d, 3);
  auto G = c.graph();
  GraphPoint w0 = G->vertex_point(Chain::w(0));
  GraphPoint vend = G->vertex_point(Chain::v(5));
  for (int i = 0; i <= 3; ++i) {
    const Divisor& Di = fam.Di(i);
    CHECK(Di.degree() == 6);
    CHECK(Di.effective());
    CHECK(Di.at(w0) == i);
    CHECK(Di.at(vend) == 3 - i);
    CHECK(fam.D() + divisor_of_function(fam.psi(i)) == Di);
    CHECK(fam.psi(i).eval(w0) == 0);
    // the unique effective representative with these multiplicities
    Divisor rest = fam.D();
    rest.add(w0, -i);
    rest.add(vend, -(3 - i));
    ReductionResult red = reduce(G, rest, w0);
    Divisor expect = Di;
    expect.add(w0, -i);
    expect.add(vend, -(3 - i));
    CHECK(red.reduced == expect);
  }
  CHECK(fam.psi(3) == PLFunction::constant(G, 0));
  CHECK(fam.Di(3) == fam.D());
}

TEST_CASE("canonical representatives for genus 10") {
  Chain c(make_admissible_chain(10, 2));
  DivisorData d = tableau_to_divisor(standard_tableau(4, 2), c, 12);
  CanonicalFamily fam(c, d, 4);
  for (int k = 1; k <= 10; ++k) CHECK(fam.chip(k, 0).has_value() == (k > 2));
  auto G = c.graph();
  GraphPoint w0 = G->vertex_point(Chain::w(0));
  GraphPoint vend = G->vertex_point(Chain::v(11));
  for (int i : {0, 2, 3}) {
    Divisor rest = fam.D();
    rest.add(w0, -i);
    rest.add(vend, -(4 - i));
    Divisor expect = fam.Di(i);
    expect.add(w0, -i);
    expect.add(vend, -(4 - i));
    CHECK(reduce(G, rest, G->vertex_point(Chain::v(6))).reduced == expect);
  }
  PLFunction p13 = fam.psi_multiset({1, 3});
  CHECK(p13.on_edge(Chain::bridge(5)).slope == std::vector<long>{6});
  CHECK(fam.D().scaled(2) + divisor_of_function(p13) == fam.D_multiset({1, 3}));
  CHECK(fam.psi_multiset({4, 4}) == PLFunction::constant(G, 0));
  CHECK(fam.psi_multiset({2}) == fam.psi(2));
  CHECK_THROWS(fam.psi_multiset({1, 2, 3}));
}

TEST_CASE("bridge slopes and piece degrees") {
  Chain c(make_admissible_chain(10, 2));
  DivisorData d = tableau_to_divisor(standard_tableau(4, 2), c, 12);
  CanonicalFamily fam(c, d, 4);
  for (int i = 0; i <= 4; ++i) {
    Divisor dv = divisor_of_function(fam.psi(i));
    for (int k = 0; k <= 10; ++k)
      CHECK(fam.psi(i).on_edge(Chain::bridge(k)).slope == std::vector<long>{fam.path().at(k, i)});
    for (int k = 1; k <= 10; ++k) {
      long deg = dv.restricted([&](const GraphPoint& p) { return c.piece_of(p) == k; }).degree();
      CHECK(deg == fam.path().at(k - 1, i) - fam.path().at(k, i));
    }
  }
}

TEST_CASE("shape cases on the standard divisor") {
  for (auto [g, r, d] : {std::tuple{10, 4, 12}, std::tuple{9, 2, 8}, std::tuple{12, 3, 12}}) {
    int s = g - d + r;
    Chain c(make_admissible_chain(g, 2));
    DivisorData data = tableau_to_divisor(standard_tableau(r, s), c, d);
    CanonicalFamily fam(c, data, r);
    for (int l = 0; l < r; ++l)
      for (int k = l * s + 1; k <= (l + 1) * s; ++k)
        for (int i = 0; i <= r; ++i) {
          ShapeCase sc = shape_case(fam, i, l, k);
          CHECK(sc.matches);
          CHECK(sc.which == (i < l ? 1 : i > l ? 2 : 3));
        }
    CHECK_THROWS(shape_case(fam, 0, 0, s + 1));
    CHECK_THROWS(shape_case(fam, 0, r, r * s + 1));
  }
}

TEST_CASE("distinct multisets disagree on every loop") {
  Chain c(make_admissible_chain(4, 2));
  DivisorData d = tableau_to_divisor(canonical_tableau_g4(), c, 6);
  CanonicalFamily fam(c, d, 3);
  std::vector<std::vector<int>> sets;
  for (int i = 0; i <= 3; ++i)
    for (int j = i; j <= 3; ++j) sets.push_back({i, j});
  for (size_t a = 0; a < sets.size(); ++a)
    for (size_t b = a + 1; b < sets.size(); ++b) {
      Divisor DA = fam.D_multiset(sets[a]), DB = fam.D_multiset(sets[b]);
      for (int k = 1; k <= 4; ++k) {
        auto on = [&](const GraphPoint& p) { return c.loop_of(p) == k; };
        CHECK_FALSE(DA.restricted(on) == DB.restricted(on));
      }
    }
  // chip of index i sits at x_j - p_{j-1}(i) m_j
  for (int k = 1; k <= 4; ++k)
    for (int i = 0; i <= 3; ++i) {
      auto y = fam.chip(k, i);
      if (y && d.x[k] != 0)
        CHECK(*y == c.canonical_x(k, d.x[k] - Q(fam.path().at(k - 1, i)) * c.params().m[k]));
    }
}
