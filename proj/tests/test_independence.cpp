#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <chrono>

#include "helpers.hpp"
#include "troplin/independence.hpp"
#include "troplin/zoo.hpp"

using namespace troplin;

namespace {

struct Genus4 {
  Chain c = Chain(make_admissible_chain(4, 2));
  DivisorData d;
  std::vector<std::vector<int>> I;
  std::vector<PLFunction> psi;
  std::unique_ptr<CanonicalFamily> fam;

  Genus4() {
    Tableau t;
    t.r = 3;
    t.s = 1;
    t.rows = {{1, 2, 3, 4}};
    d = tableau_to_divisor(t, c, 6);
    fam = std::make_unique<CanonicalFamily>(c, d, 3);
    for (int i = 0; i <= 3; ++i)
      for (int j = i; j <= 3; ++j) {
        I.push_back({i, j});
        psi.push_back(fam->psi_multiset({i, j}));
      }
  }
  int index(int i, int j) const {
    for (size_t k = 0; k < I.size(); ++k)
      if (I[k] == std::vector<int>{i, j}) return static_cast<int>(k);
    return -1;
  }
  GraphPoint bridge_mid(int k) const {
    return c.graph()->point(Chain::bridge(k), c.params().n[k] / 2);
  }
};

}  // namespace

TEST_CASE("exact lp") {
  // y0 - y1 >= 1, y1 - y2 >= 1, y2 - y0 >= -2 is tight but feasible
  std::vector<LinCon> cons = {
      {{{0, Q(1)}, {1, Q(-1)}}, Q(1), false},
      {{{1, Q(1)}, {2, Q(-1)}}, Q(1), false},
      {{{2, Q(1)}, {0, Q(-1)}}, Q(-2), false},
  };
  auto y = lp_feasible(3, cons);
  REQUIRE(y);
  CHECK((*y)[0] - (*y)[2] == 2);
  cons[2].rhs = Q(-1);
  CHECK_FALSE(lp_feasible(3, cons));
  std::vector<LinCon> eqs = {{{{0, Q(2)}, {1, Q(3)}}, qq(7, 2), true},
                             {{{0, Q(1)}, {1, Q(-1)}}, Q(0), true}};
  auto z = lp_feasible(2, eqs);
  REQUIRE(z);
  CHECK((*z)[0] == qq(7, 10));
}

TEST_CASE("genus 4 canonical family is dependent with the expected pattern") {
  Genus4 G;
  auto t0 = std::chrono::steady_clock::now();
  auto out = decide_dependence(G.psi, default_budget());
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  MESSAGE("decide on 10 functions: " << secs << " s, calls " << out.trace.feasibility_calls);
  REQUIRE(out.verdict == Verdict::Dependent);
  CHECK(verify_twice(G.psi, out.witness).holds);
  for (int k = 0; k <= 4; ++k) {
    auto p = G.bridge_mid(k);
    std::vector<int> win;
    Q best;
    for (size_t f = 0; f < G.psi.size(); ++f) {
      Q v = G.psi[f].eval(p) + out.witness[f];
      if (win.empty() || v < best) {
        best = v;
        win.assign(1, static_cast<int>(f));
      } else if (v == best) {
        win.push_back(static_cast<int>(f));
      }
    }
    std::string s;
    for (int f : win) s += std::to_string(G.I[f][0]) + std::to_string(G.I[f][1]) + " ";
    MESSAGE("bridge " << k << ": " << s);
  }
}

TEST_CASE("removing any pattern function leaves an independent set of nine") {
  Genus4 G;
  const std::vector<std::pair<int, int>> six = {{1, 1}, {0, 2}, {0, 3}, {1, 2}, {2, 2}, {1, 3}};
  for (auto [i, j] : six) {
    std::vector<PLFunction> fs;
    for (size_t k = 0; k < G.psi.size(); ++k)
      if (static_cast<int>(k) != G.index(i, j)) fs.push_back(G.psi[k]);
    auto t0 = std::chrono::steady_clock::now();
    auto out = decide_dependence(fs, default_budget());
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    MESSAGE("without " << i << j << ": " << verdict_name(out.verdict) << " in " << secs
                       << " s, nodes " << out.trace.nodes.size());
    CHECK(out.verdict == Verdict::Independent);
    std::string why;
    CHECK_MESSAGE(replay_independence(fs, out.trace, &why), why);
  }
}

TEST_CASE("shifted copy is dependent") {
  auto g = named_graph("k4", {Q(1), Q(2), qq(3, 2)});
  std::mt19937 rng(7);
  PLFunction f = testkit::random_function(rng, g);
  auto out = decide_dependence({f, plf_shift(f, Q(5))}, default_budget());
  REQUIRE(out.verdict == Verdict::Dependent);
  CHECK(out.witness == Combination{Q(5), Q(0)});
  CHECK(verify_twice({f, f}, {Q(0), Q(0)}).holds);
}

TEST_CASE("verify_twice rejects a single winner") {
  auto g = circle_graph({Q(3)});
  PLFunction f = PLFunction::constant(g, Q(0));
  auto rep = verify_twice({f, plf_shift(f, Q(1))}, {Q(0), Q(0)});
  CHECK_FALSE(rep.holds);
  REQUIRE(rep.failing);
  CHECK(rep.winners == std::vector<int>{0});
  CHECK_THROWS(verify_twice({}, {}));
}

TEST_CASE("psi_0..psi_r are independent") {
  Genus4 G;
  std::vector<PLFunction> fs;
  for (int i = 0; i <= 3; ++i) fs.push_back(G.fam->psi(i));
  auto out = decide_dependence(fs, default_budget());
  CHECK(out.verdict == Verdict::Independent);
  CHECK(replay_independence(fs, out.trace));
  std::mt19937 rng(11);
  for (int rep = 0; rep < 50; ++rep) {
    Combination b;
    for (int i = 0; i <= 3; ++i) b.push_back(qq(static_cast<long>(rng() % 2001) - 1000, 7));
    CHECK_FALSE(verify_twice(fs, b).holds);
  }
}

TEST_CASE("rank one family of multiples is independent") {
  Chain c(make_admissible_chain(4, 3));
  Tableau t;
  t.r = 1;
  t.s = 2;
  t.rows = {{1, 2}, {3, 4}};
  DivisorData d = tableau_to_divisor(t, c, 3);
  CanonicalFamily fam(c, d, 1);
  for (int m = 1; m <= 3; ++m) {
    std::vector<PLFunction> fs;
    for (int k = 0; k <= m; ++k) fs.push_back(plf_scale(fam.psi(0), k));
    auto out = decide_dependence(fs, default_budget());
    CHECK(out.verdict == Verdict::Independent);
    CHECK(replay_independence(fs, out.trace));
  }
}

TEST_CASE("pattern solver on the genus 4 dependence") {
  Genus4 G;
  auto id = [&](int i, int j) { return G.index(i, j); };
  std::vector<Anchor> anchors = {
      {G.bridge_mid(0), {id(1, 1), id(0, 2)}}, {G.bridge_mid(1), {id(1, 1), id(0, 3)}},
      {G.bridge_mid(2), {id(1, 2), id(0, 3)}}, {G.bridge_mid(3), {id(2, 2), id(0, 3)}},
      {G.bridge_mid(4), {id(2, 2), id(1, 3)}}};
  auto sol = solve_pattern(G.psi, anchors);
  REQUIRE(sol.b);
  CHECK(sol.unique);
  auto out = decide_dependence(G.psi, default_budget());
  REQUIRE(out.verdict == Verdict::Dependent);
  for (auto [i, j] : std::vector<std::pair<int, int>>{{0, 2}, {0, 3}, {1, 2}, {2, 2}, {1, 3}})
    CHECK((*sol.b)[id(i, j)] - (*sol.b)[id(1, 1)] ==
          out.witness[id(i, j)] - out.witness[id(1, 1)]);

  auto swapped = anchors;
  swapped[1].winners = {id(1, 2), id(0, 3)};
  swapped[2].winners = {id(1, 1), id(0, 3)};
  auto bad = solve_pattern(G.psi, swapped);
  CHECK_FALSE(bad.b);
}

TEST_CASE("three functions on a loop tie uniquely") {
  Genus4 G;
  // on the first loop the permissible functions are psi_02, psi_11, psi_03
  auto id = [&](int i, int j) { return G.index(i, j); };
  std::vector<PLFunction> fs = {G.psi[id(0, 2)], G.psi[id(1, 1)], G.psi[id(0, 3)]};
  std::vector<Anchor> anchors = {{G.bridge_mid(0), {1, 0}}, {G.bridge_mid(1), {1, 2}}};
  auto sol = solve_pattern(fs, anchors);
  CHECK(sol.unique);
  CHECK_THROWS(solve_pattern(fs, {{G.bridge_mid(0), {1}}}));
}

TEST_CASE("theta analysis") {
  Genus4 G;
  const Divisor& D = G.fam->D();
  for (size_t k = 0; k < G.psi.size(); ++k) {
    auto t = theta_analysis(G.c, {G.psi[k]}, {Q(0)}, D, 2);
    CHECK(t.Delta == G.fam->D_multiset(G.I[k]));
  }
  auto out = decide_dependence(G.psi, default_budget());
  REQUIRE(out.verdict == Verdict::Dependent);
  auto t = theta_analysis(G.c, G.psi, out.witness, D, 2);
  CHECK(t.Delta.effective());
  CHECK(t.Delta.degree() == 12);
  CHECK(t.delta == std::vector<long>(6, 2));
  CHECK(t.e == std::vector<long>{2, 2, 2, 2, 2, 2});
  CHECK_THROWS(theta_analysis(G.c, G.psi, out.witness, D, 1));
}

TEST_CASE("min of two functions closes a dependence") {
  std::mt19937 rng(2024);
  for (int rep = 0; rep < 40; ++rep) {
    auto g = testkit::random_graph(rng, 4, 3);
    PLFunction f = testkit::random_function(rng, g);
    PLFunction h = testkit::random_function(rng, g);
    PLFunction k = testkit::random_function(rng, g);
    PLFunction m = plf_shift(plf_min(f, plf_shift(h, qq(static_cast<long>(rng() % 7), 2))), Q(3));
    std::vector<PLFunction> fs = {k, f, m, h};
    auto out = decide_dependence(fs, default_budget());
    REQUIRE(out.verdict == Verdict::Dependent);
    CHECK(verify_twice(fs, out.witness).holds);
    CHECK(*std::min_element(out.witness.begin(), out.witness.end()) == 0);
  }
}
