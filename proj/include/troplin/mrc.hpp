// Pair sets, permissibility, windows and the independence certifier for
// products of pairs of sections on a chain of loops.

#ifndef TROPLIN_MRC_HPP
#define TROPLIN_MRC_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "troplin/chain.hpp"

namespace troplin {

using Pair = std::pair<int, int>;

long ceil_half(long r);
long eps_parity(long r);  // 0 for even r, 1 for odd r

bool identity_check(long g, long r, long d);

enum class Region { Kept, LowerTriangle, UpperTriangle, Chevron };
std::string region_name(Region x);
Region classify_pair(long r, long s, int i, int j);

struct PairSet {
  long g = 0, r = 0, d = 0, s = 0;
  std::vector<Pair> kept;
  std::vector<std::pair<Pair, Region>> excluded;
};

std::vector<Pair> all_pairs(int r);
// Requires rho(g, r, d) = 0.
PairSet build_A(long g, long r, long d);

struct Window {
  long l = 0;
  long a = 0, b = 0;
  long level = 0;  // l - s + ceil(r/2)
  bool degenerate() const { return a == b + 1; }
};

Window window(long g, long r, long d, long l);

// Prefix sums S[k] = delta_0 + ... + delta_k, k = 0..g+1.
std::vector<Pair> permissible(const CanonicalFamily& fam, const std::vector<long>& S, int k,
                              const std::vector<Pair>& among);
std::vector<Pair> permissible_window(const CanonicalFamily& fam, const std::vector<long>& S,
                                     int a, int b, const std::vector<Pair>& among);

std::vector<Pair> counting_lemma(long g, long r, long d, long l);
long counting_sigma(long g, long r, long d, long l);

struct TieEdge {
  GraphPoint point;
  Pair u, v;
};

struct Relation {
  std::vector<long> coef;  // coef[k] multiplies m_k, k = 1..g; empty when not decodable
  Q value;                 // sum of coef[k] m_k
  bool small = false;      // |coef| <= g + 1 and only bottom lengths appear
  std::vector<int> cycle;  // indices of the tie edges used
  std::string to_string() const;
};

// Finds the first cycle in the tie graph and returns the signed sum of its
// edge equations, decoded over the bottom edge lengths.
Relation extract_relation(const CanonicalFamily& fam, const std::vector<TieEdge>& edges);

struct ZFact {
  int k = 0;              // bridge beta_k
  std::vector<long> forbidden;  // values of e(k) in [2, M] with fewer than two slope partners
};

struct WFact {
  int a = 0, b = 0;
  long level = 0;
  bool scheduled = false;
  std::string reason;  // "counting" or "relation"
  std::vector<std::vector<Pair>> perm;  // permissible pairs on each loop a..b
  long nodes = 0;                       // tie assignments explored
  std::vector<Relation> relations;      // distinct contradictions met
};

struct InstanceMeta {
  std::string kind;  // "rho0", "rho-injective", "rho-surjective", "generic"
  long nu = 0, nu1 = 0, nu2 = 0, eta = 0;
  std::vector<long> alpha;          // alpha[k] for k = 0..2r
  std::vector<int> inserted;        // indices of inserted lingering loops
  std::vector<Window> schedule;     // windows with levels in final chain coordinates
};

struct MrcInstance {
  long g = 0, r = 0, d = 0;
  ChainParams params;
  DivisorData data;
  std::vector<Pair> A;
  InstanceMeta meta;
};

// The rho = 0 standard instance, or the rho > 0 constructions.
MrcInstance build_instance(long g, long r, long d);
MrcInstance rho_positive_build(long g, long r, long d);

// Rank-r vertex avoiding class: standard tableau followed by lingering loops.
MrcInstance generic_vertex_avoiding(long g, long r, long d, long mbar);

struct MrcCertificate {
  long g = 0, r = 0, d = 0, m = 2, rho = 0, s = 0;
  long M = 0;  // md - 2g - 2, the largest possible e(g)
  std::string branch;
  std::vector<Pair> A;
  DivisorData data;
  InstanceMeta meta;
  std::vector<ZFact> z;
  std::vector<WFact> w;
  bool certified = false;
  long e_min = 0;          // least e(g) compatible with the facts (M + 1 means larger than M)
  long ledger = 0;         // 2g + 2 + e_min, a lower bound for deg(Delta)
  std::vector<long> counter_profile;
};

MrcCertificate certify_mrc(long g, long r, long d);
MrcCertificate certify_instance(const MrcInstance& inst);
bool verify_mrc(const MrcCertificate& c, std::string* why = nullptr);

struct LowDegreeCertificate {
  long g = 0, r = 0, d = 0, m = 0;
  long md = 0;
  long floor = 0;  // 2g + 4: two chips on each of the g + 2 pieces
  bool certified = false;
};

LowDegreeCertificate low_degree_certify(long g, long r, long d, long m);

// Multisets of size m from {0..r}, lexicographic.
std::vector<std::vector<int>> multisets(int r, int m);

}  // namespace troplin

#endif
