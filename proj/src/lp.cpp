#include "troplin/lp.hpp"

#include <stdexcept>

namespace troplin {

std::optional<std::vector<Q>> lp_feasible(int nvars, const std::vector<LinCon>& cons) {
  const int m = static_cast<int>(cons.size());
  if (m == 0) return std::vector<Q>(nvars, Q(0));

  // Columns: y+ and y- per variable, one slack per inequality, artificials as needed.
  std::vector<int> slack_col(m, -1), art_col(m, -1);
  int ncol = 2 * nvars;
  for (int i = 0; i < m; ++i)
    if (!cons[i].eq) slack_col[i] = ncol++;
  const int art_begin = ncol;
  std::vector<int> sign(m, 1);
  std::vector<int> basis(m, -1);
  for (int i = 0; i < m; ++i) {
    if (cons[i].rhs < 0 || (!cons[i].eq && sgn(cons[i].rhs) == 0)) sign[i] = -1;
    // Slack enters with coefficient -sign; usable as a basis column when that is +1.
    if (!cons[i].eq && sign[i] == -1) basis[i] = slack_col[i];
  }
  for (int i = 0; i < m; ++i)
    if (basis[i] < 0) {
      art_col[i] = ncol++;
      basis[i] = art_col[i];
    }

  const int W = ncol + 1;
  std::vector<std::vector<Q>> T(m, std::vector<Q>(W));
  for (int i = 0; i < m; ++i) {
    const Q s(sign[i]);
    for (const auto& [j, a] : cons[i].coef) {
      if (j < 0 || j >= nvars) throw std::out_of_range("lp: variable index");
      T[i][2 * j] += s * a;
      T[i][2 * j + 1] -= s * a;
    }
    if (slack_col[i] >= 0) T[i][slack_col[i]] = -s;
    if (art_col[i] >= 0) T[i][art_col[i]] = 1;
    T[i][ncol] = s * cons[i].rhs;
  }
  std::vector<Q> z(W);
  for (int i = 0; i < m; ++i) {
    if (art_col[i] < 0) continue;
    for (int j = 0; j < art_begin; ++j)
      if (sgn(T[i][j]) != 0) z[j] -= T[i][j];
    z[ncol] -= T[i][ncol];
  }

  std::vector<int> nz;
  for (;;) {
    int enter = -1;
    for (int j = 0; j < ncol; ++j)
      if (sgn(z[j]) < 0) {
        enter = j;
        break;
      }
    if (enter < 0) break;
    int leave = -1;
    Q best;
    for (int i = 0; i < m; ++i) {
      if (sgn(T[i][enter]) <= 0) continue;
      Q ratio = T[i][ncol] / T[i][enter];
      if (leave < 0 || ratio < best || (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave < 0) break;  // unbounded direction; phase one objective is bounded below
    auto& P = T[leave];
    const Q piv = P[enter];
    nz.clear();
    for (int j = 0; j < W; ++j)
      if (sgn(P[j]) != 0) {
        P[j] /= piv;
        nz.push_back(j);
      }
    for (int i = 0; i < m; ++i) {
      if (i == leave || sgn(T[i][enter]) == 0) continue;
      const Q f = T[i][enter];
      for (int j : nz) T[i][j] -= f * P[j];
    }
    if (sgn(z[enter]) != 0) {
      const Q f = z[enter];
      for (int j : nz) z[j] -= f * P[j];
    }
    basis[leave] = enter;
  }
  if (sgn(z[ncol]) != 0) return std::nullopt;

  std::vector<Q> col(ncol);
  for (int i = 0; i < m; ++i) col[basis[i]] = T[i][ncol];
  std::vector<Q> y(nvars);
  for (int j = 0; j < nvars; ++j) y[j] = col[2 * j] - col[2 * j + 1];
  for (const auto& c : cons) {
    Q lhs;
    for (const auto& [j, a] : c.coef) lhs += a * y[j];
    if (c.eq ? lhs != c.rhs : lhs < c.rhs) throw std::logic_error("lp: solution check failed");
  }
  return y;
}

}  // namespace troplin
