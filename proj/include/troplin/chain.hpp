// Chain of loops with bridges, divisor classes and lingering lattice paths.

#ifndef TROPLIN_CHAIN_HPP
#define TROPLIN_CHAIN_HPP

#include <optional>
#include <string>
#include <vector>

#include "troplin/plf.hpp"

namespace troplin {

// Loops are numbered 1..g; index 0 of ell and m is unused.
struct ChainParams {
  int g = 0;
  long mbar = 1;
  std::vector<Q> ell;
  std::vector<Q> m;
  std::vector<Q> n;  // n[k] is the length of the bridge from w_k to v_{k+1}, k = 0..g
  bool trusted = false;
};

ChainParams make_admissible_chain(int g, long mbar);

struct AdmissibilityReport {
  bool loop_ratio = true;     // 4g m_k < ell_k
  bool long_bridges = true;   // 2 mbar ell_k < min(n_{k-1}, n_k)
  bool relation_free = true;  // no small relation among the m_k
  bool relation_checked = false;
  std::string detail;
  bool ok() const { return loop_ratio && long_bridges && relation_free; }
};

// Relations are searched exhaustively for g <= 6; larger inputs rely on the
// trusted flag (set by the constructor).
AdmissibilityReport check_admissible(const ChainParams& p);

// Brute force: true if some nonzero c with |c_i| <= bound has sum c_i m_i = 0.
bool has_small_relation(const std::vector<Q>& m, long bound);

struct DivisorData {
  long d0 = 0;
  std::vector<Q> x;  // x[k] in [0, ell_k + m_k), index 0 unused; 0 means no chip
  friend bool operator==(const DivisorData& a, const DivisorData& b) {
    return a.d0 == b.d0 && a.x == b.x;
  }
};

enum class StepKind { Down, Dir, Linger };

struct Step {
  StepKind kind = StepKind::Linger;
  int dir = -1;  // coordinate for Dir steps
};

struct LingeringPath {
  int r = 0;
  std::vector<std::vector<long>> p;  // p[i][j], i = 0..g, j = 0..r-1
  std::vector<Step> steps;           // steps[i] for i = 1..g, steps[0] unused
  bool in_chamber = true;
  // p_i(j) with the convention p_i(r) = 0.
  long at(int i, int j) const { return j == r ? 0 : p.at(i).at(j); }
  int lingering_count() const;
};

// Rows are s rows of r+1 entries; columns numbered 0..r.
struct Tableau {
  int r = 0;
  int s = 0;
  std::vector<std::vector<int>> rows;
  friend bool operator==(const Tableau& a, const Tableau& b) {
    return a.r == b.r && a.s == b.s && a.rows == b.rows;
  }
};

long rho(long g, long r, long d);
long s_param(long g, long r, long d);

class Chain {
 public:
  explicit Chain(ChainParams p);

  const ChainParams& params() const { return p_; }
  int genus() const { return p_.g; }
  const GraphPtr& graph() const { return g_; }

  // Vertex ids: w_k = 2k (k = 0..g), v_k = 2k - 1 (k = 1..g+1).
  static int w(int k) { return 2 * k; }
  static int v(int k) { return 2 * k - 1; }
  // Edge ids: bridge beta_k = 3k, top of loop k = 3k - 2, bottom = 3k - 1.
  static int bridge(int k) { return 3 * k; }
  static int top(int k) { return 3 * k - 2; }
  static int bottom(int k) { return 3 * k - 1; }

  Q loop_length(int k) const { return p_.ell[k] + p_.m[k]; }
  // Point at counterclockwise distance y from v_k (bottom edge first).
  GraphPoint ccw_point(int k, const Q& y) const;
  // Inverse of ccw_point for points on loop k (vertex v_k maps to 0).
  std::optional<Q> ccw_coord(int k, const GraphPoint& pt) const;
  // Index of the piece gamma_0 .. gamma_{g+1} containing a point.
  int piece_of(const GraphPoint& pt) const;
  // Loop index of a point strictly inside loop k (excluding v_k, w_k), else 0.
  int loop_of(const GraphPoint& pt) const;

  Divisor to_divisor(const DivisorData& d) const;
  // Inverse of to_divisor for w_0-reduced divisors.
  DivisorData from_divisor(const Divisor& D) const;
  Q canonical_x(int k, const Q& y) const { return mod_q(y, loop_length(k)); }

 private:
  ChainParams p_;
  GraphPtr g_;
};

LingeringPath lingering_path(const Chain& c, const DivisorData& d, int r);
bool rank_at_least(const Chain& c, const DivisorData& d, int r);
long rank_exact(const Chain& c, const DivisorData& d);
long degree_of(const DivisorData& d);

Tableau standard_tableau(int r, int s);
bool is_standard(const Tableau& t, int g);
DivisorData tableau_to_divisor(const Tableau& t, const Chain& c, long d);
Tableau path_to_tableau(const LingeringPath& p, int s);

bool is_vertex_avoiding(const Chain& c, const DivisorData& d, int r, long deg);

// Representatives D_i ~ D with i chips at w_0 and r - i at v_{g+1}.
class CanonicalFamily {
 public:
  CanonicalFamily(const Chain& c, const DivisorData& d, int r);

  const Chain& chain() const { return c_; }
  const DivisorData& data() const { return d_; }
  const LingeringPath& path() const { return path_; }
  int r() const { return r_; }
  const Divisor& D() const { return D_; }

  // Counterclockwise position of the chip of D_i on loop k, if any.
  std::optional<Q> chip(int k, int i) const;
  // Degree of D_i restricted to the pieces gamma_0 .. gamma_k.
  long prefix_degree(int k, int i) const;
  const Divisor& Di(int i) const { return Di_.at(i); }
  const PLFunction& psi(int i) const { return psi_.at(i); }
  // psi_I for a multiset I given as a sorted index list.
  PLFunction psi_multiset(const std::vector<int>& I) const;
  Divisor D_multiset(const std::vector<int>& I) const;

 private:
  void build(int i);

  Chain c_;
  DivisorData d_;
  int r_;
  LingeringPath path_;
  Divisor D_;
  std::vector<Divisor> Di_;
  std::vector<PLFunction> psi_;
};

struct ShapeCase {
  int which = 0;  // 1, 2 or 3
  long left_slope = 0;
  long bottom_slope = 0;
  long right_slope = 0;
  std::optional<Q> top_offset;  // predicted chip offset on the top edge from v_k
  bool matches = false;         // prediction agrees with the computed representative
};

ShapeCase shape_case(const CanonicalFamily& fam, int i, int l, int k);

}  // namespace troplin

#endif
