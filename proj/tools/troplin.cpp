// troplin command-line front end.
// Exit codes: 0 certified or decided, 2 undecided or not certified, 1 error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "troplin/io.hpp"
#include "troplin/zoo.hpp"

using namespace troplin;

namespace {

constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kUndecided = 2;

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return json::parse(in);
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

void write_json(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

std::vector<Q> parse_lengths(const std::string& s) {
  std::vector<Q> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(q_from_string(tok));
  return out;
}

// Where a divisor class comes from.
struct ClassArgs {
  std::string chain_file;
  int g = 0;
  long mbar = 2;
  std::string data_file;
  std::string tableau_file;
  long d = -1;
  int r = 0;
};

void add_class_options(CLI::App* sub, ClassArgs& a) {
  sub->add_option("--chain", a.chain_file, "ChainParams JSON");
  sub->add_option("--g", a.g, "genus (admissible chain)");
  sub->add_option("--mbar", a.mbar, "multiplicity bound for the admissible chain");
  sub->add_option("--data", a.data_file, "DivisorData JSON");
  sub->add_option("--tableau", a.tableau_file, "Tableau JSON");
  sub->add_option("--d", a.d, "degree, with --tableau");
  sub->add_option("--r", a.r, "rank")->required();
}

Chain load_chain(const ClassArgs& a) {
  if (!a.chain_file.empty()) return Chain(chain_from_json(read_json(a.chain_file)));
  if (a.g < 1) throw std::invalid_argument("need --chain or --g");
  return Chain(make_admissible_chain(a.g, a.mbar));
}

DivisorData load_data(const ClassArgs& a, const Chain& c) {
  if (!a.data_file.empty()) return data_from_json(read_json(a.data_file));
  if (a.tableau_file.empty()) throw std::invalid_argument("need --data or --tableau");
  if (a.d < 0) throw std::invalid_argument("--tableau needs --d");
  return tableau_to_divisor(tableau_from_json(read_json(a.tableau_file)), c, a.d);
}

std::string multiset_label(const std::vector<int>& I) {
  std::string s;
  for (int i : I) s += std::to_string(i);
  return s;
}

Family pair_family(const CanonicalFamily& fam, const std::vector<Pair>& A) {
  Family f;
  f.graph = fam.chain().graph();
  for (const auto& [i, j] : A) {
    f.funcs.push_back(fam.psi_multiset({i, j}));
    f.labels.push_back(multiset_label({i, j}));
  }
  return f;
}

int report_verdict(const DependenceOutcome& out, const Family& f, const std::string& path) {
  write_json(path, dependence_certificate(f, out));
  std::cerr << "verdict: " << verdict_name(out.verdict) << "\n";
  return out.verdict == Verdict::Undecided ? kUndecided : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tropical independence certificates on metric graphs"};
  app.require_subcommand(1);
  long budget = default_budget();
  std::string out_path;
  app.add_option("--budget", budget, "search budget (default TROPLIN_BUDGET or 10^6)");
  app.add_option("--out,-o", out_path, "output file (default stdout)");
  int code = kOk;

  // chain
  auto* chain = app.add_subcommand("chain", "chains of loops");
  chain->require_subcommand(1);
  int cg = 0;
  long cmbar = 1;
  auto* chain_make = chain->add_subcommand("make", "admissible chain parameters");
  chain_make->add_option("--g", cg)->required()->check(CLI::PositiveNumber);
  chain_make->add_option("--mbar", cmbar)->required()->check(CLI::PositiveNumber);
  chain_make->add_option("--out,-o", out_path);
  chain_make->callback([&] {
    ChainParams p = make_admissible_chain(cg, cmbar);
    AdmissibilityReport rep = check_admissible(p);
    json j = chain_to_json(p);
    j["report"] = {{"loop_ratio", rep.loop_ratio}, {"long_bridges", rep.long_bridges},
                   {"relation_free", rep.relation_free}, {"relation_checked", rep.relation_checked},
                   {"ok", rep.ok()}, {"detail", rep.detail}};
    write_json(out_path, j);
    code = rep.ok() ? kOk : kUndecided;
  });

  // divisor
  auto* divisor = app.add_subcommand("divisor", "divisor classes on a chain");
  divisor->require_subcommand(1);
  ClassArgs ca;
  std::string dot_path;
  long ts = -1;
  auto* div_rank = divisor->add_subcommand("rank", "exact rank and rank >= r test");
  auto* div_path = divisor->add_subcommand("path", "lingering lattice path");
  auto* div_tab = divisor->add_subcommand("tableau", "tableau of the lingering path");
  for (auto* s : {div_rank, div_path, div_tab}) {
    add_class_options(s, ca);
    s->add_option("--out,-o", out_path);
  }
  div_path->add_option("--dot", dot_path, "also write a DOT drawing of the divisor");
  div_tab->add_option("--s", ts, "rows (default from g, r, d)");
  div_rank->callback([&] {
    Chain c = load_chain(ca);
    DivisorData d = load_data(ca, c);
    bool ok = rank_at_least(c, d, ca.r);
    write_json(out_path, {{"degree", degree_of(d)}, {"r", ca.r}, {"rank_at_least_r", ok},
                          {"rank", rank_exact(c, d)}});
    code = ok ? kOk : kUndecided;
  });
  div_path->callback([&] {
    Chain c = load_chain(ca);
    DivisorData d = load_data(ca, c);
    LingeringPath p = lingering_path(c, d, ca.r);
    write_json(out_path, path_to_json(p));
    if (!dot_path.empty()) write_text(dot_path, chain_dot(c, d));
  });
  div_tab->callback([&] {
    Chain c = load_chain(ca);
    DivisorData d = load_data(ca, c);
    LingeringPath p = lingering_path(c, d, ca.r);
    long s = ts >= 0 ? ts : s_param(c.genus(), ca.r, degree_of(d));
    write_json(out_path, tableau_to_json(path_to_tableau(p, static_cast<int>(s))));
  });

  // psi
  auto* psi = app.add_subcommand("psi", "canonical functions");
  psi->require_subcommand(1);
  int psi_m = 1;
  auto* psi_emit = psi->add_subcommand("emit", "functions psi_I for all multisets I of size m");
  add_class_options(psi_emit, ca);
  psi_emit->add_option("--m", psi_m)->check(CLI::PositiveNumber);
  psi_emit->add_option("--out,-o", out_path);
  psi_emit->callback([&] {
    Chain c = load_chain(ca);
    CanonicalFamily fam(c, load_data(ca, c), ca.r);
    Family f;
    f.graph = c.graph();
    for (const auto& I : multisets(ca.r, psi_m)) {
      f.funcs.push_back(fam.psi_multiset(I));
      f.labels.push_back(multiset_label(I));
    }
    write_json(out_path, family_to_json(f));
  });

  // depend
  auto* depend = app.add_subcommand("depend", "tropical dependence");
  depend->require_subcommand(1);
  std::string family_file, witness_file, anchors_file;
  auto* dep_verify = depend->add_subcommand("verify", "check a dependence witness");
  auto* dep_decide = depend->add_subcommand("decide", "exact decision with a certificate");
  auto* dep_pattern = depend->add_subcommand("pattern", "solve for constants from tie anchors");
  for (auto* s : {dep_verify, dep_decide, dep_pattern}) {
    s->add_option("--family", family_file, "Family JSON")->required();
    s->add_option("--out,-o", out_path);
  }
  dep_verify->add_option("--witness", witness_file, "list of constants")->required();
  dep_pattern->add_option("--anchors", anchors_file, "[{point, winners}]")->required();
  dep_decide->add_option("--budget", budget);
  dep_verify->callback([&] {
    Family f = family_from_json(read_json(family_file));
    Combination b = combination_from_json(read_json(witness_file));
    if (b.size() != f.funcs.size()) throw std::invalid_argument("witness size differs from family size");
    TwiceReport rep = verify_twice(f.funcs, b);
    json j = {{"holds", rep.holds}};
    if (rep.failing) j["failing"] = point_to_json(*rep.failing);
    j["winners"] = rep.winners;
    write_json(out_path, j);
    code = rep.holds ? kOk : kUndecided;
  });
  dep_decide->callback([&] {
    Family f = family_from_json(read_json(family_file));
    code = report_verdict(decide_dependence(f.funcs, budget), f, out_path);
  });
  dep_pattern->callback([&] {
    Family f = family_from_json(read_json(family_file));
    std::vector<Anchor> anchors;
    for (const auto& a : read_json(anchors_file))
      anchors.push_back({point_from_json(a.at("point")), a.at("winners").get<std::vector<int>>()});
    PatternSolution sol = solve_pattern(f.funcs, anchors);
    json j = {{"unique", sol.unique}, {"reason", sol.reason}};
    if (sol.b) j["b"] = combination_to_json(*sol.b);
    write_json(out_path, j);
    code = sol.b ? kOk : kUndecided;
  });

  // mrc
  auto* mrc = app.add_subcommand("mrc", "maximal rank certificates");
  mrc->require_subcommand(1);
  long mg = 0, mr = 0, md = 0, mm = 2;
  std::string emit = "json";
  bool brute = false;
  auto* mrc_cert = mrc->add_subcommand("certify", "degree ledger certificate for m = 2");
  auto* mrc_brute = mrc->add_subcommand("brute", "exact decision on the psi_ij for ij in A");
  auto* mrc_setA = mrc->add_subcommand("set-A", "the pair set A");
  auto* mrc_low = mrc->add_subcommand("low-degree", "md < 2g + 4 certificate");
  for (auto* s : {mrc_cert, mrc_brute, mrc_setA, mrc_low}) {
    s->add_option("--g", mg)->required();
    s->add_option("--r", mr)->required();
    s->add_option("--d", md)->required();
    s->add_option("--out,-o", out_path);
  }
  mrc_brute->add_option("--budget", budget);
  mrc_setA->add_option("--emit", emit)->check(CLI::IsMember({"json", "svg-dot"}));
  mrc_low->add_option("--m", mm)->required();
  mrc_low->add_flag("--brute", brute, "also run the exact decider");
  mrc_low->add_option("--budget", budget);
  mrc_cert->callback([&] {
    MrcCertificate c = certify_mrc(mg, mr, md);
    write_json(out_path, mrc_to_json(c));
    std::cerr << (c.certified ? "certified" : "not certified") << ", ledger " << c.ledger << "\n";
    code = c.certified ? kOk : kUndecided;
  });
  mrc_brute->callback([&] {
    MrcInstance inst = build_instance(mg, mr, md);
    CanonicalFamily fam(Chain(inst.params), inst.data, static_cast<int>(mr));
    Family f = pair_family(fam, inst.A);
    code = report_verdict(decide_dependence(f.funcs, budget), f, out_path);
  });
  mrc_setA->callback([&] {
    PairSet A = build_A(mg, mr, md);
    if (emit == "json") write_json(out_path, pairset_to_json(A));
    else write_text(out_path, pairset_dot(A));
  });
  mrc_low->callback([&] {
    LowDegreeCertificate c = low_degree_certify(mg, mr, md, mm);
    json j = low_degree_to_json(c);
    if (brute) {
      MrcInstance inst = generic_vertex_avoiding(mg, mr, md, mm);
      CanonicalFamily fam(Chain(inst.params), inst.data, static_cast<int>(mr));
      std::vector<PLFunction> fs;
      for (const auto& I : multisets(static_cast<int>(mr), static_cast<int>(mm)))
        fs.push_back(fam.psi_multiset(I));
      DependenceOutcome out = decide_dependence(fs, budget);
      j["brute"] = verdict_name(out.verdict);
      if (out.verdict == Verdict::Dependent) c.certified = false;
    }
    write_json(out_path, j);
    code = c.certified ? kOk : kUndecided;
  });

  // noether
  auto* noether = app.add_subcommand("noether", "edge functions on trivalent graphs");
  noether->require_subcommand(1);
  std::string graph_file, named, lens;
  bool nbrute = false;
  auto* noe_cert = noether->add_subcommand("certify", "3g - 3 functions with single edge minima");
  auto* gopt = noe_cert->add_option("--graph", graph_file, "graph JSON");
  auto* nopt = noe_cert->add_option("--named", named, "k4, theta, cube or petersen");
  gopt->excludes(nopt);
  noe_cert->add_option("--lengths", lens, "comma separated p/q lengths for --named");
  noe_cert->add_flag("--brute", nbrute, "also run the exact decider");
  noe_cert->add_option("--budget", budget);
  noe_cert->add_option("--out,-o", out_path);
  noe_cert->callback([&] {
    GraphPtr g;
    if (!graph_file.empty()) g = graph_from_json(read_json(graph_file));
    else if (!named.empty()) g = named_graph(named, parse_lengths(lens));
    else throw std::invalid_argument("need --graph or --named");
    NoetherCertificate c = noether_certify(g, nbrute ? budget : 0);
    write_json(out_path, noether_to_json(*g, c));
    bool ok = c.certified && (!c.brute || *c.brute != Verdict::Dependent);
    code = ok ? kOk : kUndecided;
  });

  // verify
  auto* verify = app.add_subcommand("verify", "re-check a certificate file");
  std::string cert_file;
  verify->add_option("certificate", cert_file)->required();
  verify->callback([&] {
    std::string why;
    bool ok = verify_certificate(read_json(cert_file), &why);
    std::cout << (ok ? "valid" : "invalid: " + why) << "\n";
    code = ok ? kOk : kUndecided;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return code;
}
