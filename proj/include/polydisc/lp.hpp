#pragma once

// Exact rational linear feasibility: { A_eq x = b_eq, A_ge x >= b_ge } with
// free variables. Equalities are eliminated by parameterization, then a
// phase-1 simplex with Bland's rule decides the inequality system. Strict
// systems are handled by callers via homogeneous scaling (">= 1" rows).

#include "polydisc/linalg.hpp"

namespace polydisc {

struct LPResult {
  bool feasible = false;
  Vec witness;  // an exact feasible point when feasible
};

namespace detail {

// Feasibility of { C t >= d } with free t, via phase-1 simplex on
// C u - C v - s = d', u, v, s >= 0.
inline LPResult lp_ineq_feasible(const Mat& c, const Vec& d) {
  size_t m = c.size();
  size_t n = m ? c[0].size() : 0;
  if (m == 0) return {true, Vec(n, Rat(0))};

  size_t nz = 2 * n + m;           // structural variables
  size_t total = nz + m;           // plus artificials
  Mat tab(m, Vec(total + 1, Rat(0)));
  for (size_t i = 0; i < m; ++i) {
    Rat sgn = d[i] < 0 ? Rat(-1) : Rat(1);
    for (size_t j = 0; j < n; ++j) {
      tab[i][j] = sgn * c[i][j];
      tab[i][n + j] = -sgn * c[i][j];
    }
    tab[i][2 * n + i] = -sgn;
    tab[i][nz + i] = 1;
    tab[i][total] = sgn * d[i];
  }
  std::vector<size_t> basis(m);
  for (size_t i = 0; i < m; ++i) basis[i] = nz + i;

  // Objective: minimize the sum of artificials. Reduced-cost row after
  // pricing out the (artificial) starting basis.
  Vec cost(total + 1, Rat(0));
  for (size_t j = nz; j < total; ++j) cost[j] = 1;
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j <= total; ++j) cost[j] -= tab[i][j];

  while (true) {
    size_t enter = total;
    for (size_t j = 0; j < total; ++j)
      if (cost[j] < 0) { enter = j; break; }  // Bland: first improving column
    if (enter == total) break;
    size_t leave = m;
    Rat best_ratio = 0;
    for (size_t i = 0; i < m; ++i) {
      if (tab[i][enter] <= 0) continue;
      Rat ratio = tab[i][total] / tab[i][enter];
      if (leave == m || ratio < best_ratio ||
          (ratio == best_ratio && basis[i] < basis[leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave == m) break;  // unbounded in phase 1 cannot happen, but be safe
    Rat piv = tab[leave][enter];
    for (auto& x : tab[leave]) x /= piv;
    for (size_t i = 0; i < m; ++i) {
      if (i == leave || tab[i][enter] == 0) continue;
      Rat f = tab[i][enter];
      for (size_t j = 0; j <= total; ++j) tab[i][j] -= f * tab[leave][j];
    }
    if (cost[enter] != 0) {
      Rat f = cost[enter];
      for (size_t j = 0; j <= total; ++j) cost[j] -= f * tab[leave][j];
    }
    basis[leave] = enter;
  }

  Rat objective = -cost[total];
  if (objective != 0) return {false, {}};
  Vec z(total, Rat(0));
  for (size_t i = 0; i < m; ++i)
    if (basis[i] < total) z[basis[i]] = tab[i][total];
  Vec t(n, Rat(0));
  for (size_t j = 0; j < n; ++j) t[j] = z[j] - z[n + j];
  return {true, t};
}

}  // namespace detail

inline LPResult lp_feasible(const Mat& a_eq, const Vec& b_eq, const Mat& a_ge,
                            const Vec& b_ge, size_t nvars) {
  Vec x0(nvars, Rat(0));
  Mat basis_n = mat_identity(nvars);
  if (!a_eq.empty()) {
    auto sol = solve(a_eq, b_eq);
    if (!sol) return {false, {}};
    x0 = *sol;
    basis_n = mat_transpose(kernel_basis(a_eq));  // columns span the kernel
  }
  size_t free_dim = basis_n.empty() ? 0 : basis_n[0].size();
  Mat c(a_ge.size(), Vec(free_dim, Rat(0)));
  Vec d(a_ge.size(), Rat(0));
  for (size_t i = 0; i < a_ge.size(); ++i) {
    d[i] = b_ge[i] - dot(a_ge[i], x0);
    for (size_t j = 0; j < free_dim; ++j) {
      Rat s = 0;
      for (size_t t = 0; t < nvars; ++t) s += a_ge[i][t] * basis_n[t][j];
      c[i][j] = s;
    }
  }
  auto inner = detail::lp_ineq_feasible(c, d);
  if (!inner.feasible) return {false, {}};
  Vec x = x0;
  for (size_t t = 0; t < nvars; ++t)
    for (size_t j = 0; j < free_dim; ++j) x[t] += basis_n[t][j] * inner.witness[j];
  return {true, x};
}

}  // namespace polydisc
