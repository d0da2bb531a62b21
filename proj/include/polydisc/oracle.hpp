#pragma once

// Desk-scale symbolic ground truth: sparse multivariate integer polynomials,
// fraction-free Sylvester resultants, and univariate A-discriminants with
// their Newton polytopes. Everything here stays independent of the
// polyhedral pipeline so it can serve as an oracle for it.

#include "polydisc/int_matrix.hpp"
#include "polydisc/obstruction.hpp"
#include "polydisc/polytope.hpp"

#include <functional>

namespace polydisc {

struct SparsePoly {
  int nvars = 0;
  std::map<std::vector<int>, Int> terms;  // exponent vector -> coefficient

  SparsePoly() = default;
  explicit SparsePoly(int nv) : nvars(nv) {}

  static SparsePoly constant(int nv, const Int& c) {
    SparsePoly p(nv);
    if (c != 0) p.terms[std::vector<int>(nv, 0)] = c;
    return p;
  }
  static SparsePoly monomial(int nv, const std::vector<int>& exp, const Int& c) {
    SparsePoly p(nv);
    if (c != 0) p.terms[exp] = c;
    return p;
  }
  static SparsePoly variable(int nv, int i) {
    std::vector<int> e(nv, 0);
    e[i] = 1;
    return monomial(nv, e, 1);
  }

  bool is_zero() const { return terms.empty(); }
  bool is_constant() const {
    return terms.empty() ||
           (terms.size() == 1 &&
            std::all_of(terms.begin()->first.begin(), terms.begin()->first.end(),
                        [](int e) { return e == 0; }));
  }

  void add_term(const std::vector<int>& e, const Int& c) {
    auto it = terms.find(e);
    if (it == terms.end()) {
      if (c != 0) terms[e] = c;
    } else {
      it->second += c;
      if (it->second == 0) terms.erase(it);
    }
  }

  int degree_in(int var) const {
    int d = 0;
    for (const auto& [e, c] : terms) d = std::max(d, e[var]);
    return d;
  }
  int total_degree() const {
    int d = 0;
    for (const auto& [e, c] : terms) {
      int s = 0;
      for (int x : e) s += x;
      d = std::max(d, s);
    }
    return d;
  }

  SparsePoly operator+(const SparsePoly& o) const {
    SparsePoly r = *this;
    for (const auto& [e, c] : o.terms) r.add_term(e, c);
    return r;
  }
  SparsePoly operator-(const SparsePoly& o) const {
    SparsePoly r = *this;
    for (const auto& [e, c] : o.terms) r.add_term(e, -c);
    return r;
  }
  SparsePoly operator-() const {
    SparsePoly r(nvars);
    for (const auto& [e, c] : terms) r.terms[e] = -c;
    return r;
  }
  SparsePoly operator*(const SparsePoly& o) const {
    SparsePoly r(nvars);
    for (const auto& [e1, c1] : terms)
      for (const auto& [e2, c2] : o.terms) {
        std::vector<int> e(nvars);
        for (int i = 0; i < nvars; ++i) e[i] = e1[i] + e2[i];
        r.add_term(e, c1 * c2);
      }
    return r;
  }
  bool operator==(const SparsePoly& o) const { return terms == o.terms; }

  SparsePoly pow(int n) const {
    SparsePoly r = constant(nvars, 1);
    for (int i = 0; i < n; ++i) r = r * (*this);
    return r;
  }

  SparsePoly derivative(int var) const {
    SparsePoly r(nvars);
    for (const auto& [e, c] : terms) {
      if (e[var] == 0) continue;
      std::vector<int> f = e;
      f[var] -= 1;
      r.add_term(f, c * e[var]);
    }
    return r;
  }

  // Coefficient of var^d, as a polynomial with the var slot zeroed.
  SparsePoly coefficient_of(int var, int d) const {
    SparsePoly r(nvars);
    for (const auto& [e, c] : terms)
      if (e[var] == d) {
        std::vector<int> f = e;
        f[var] = 0;
        r.add_term(f, c);
      }
    return r;
  }

  Int content() const {
    Int g = 0;
    for (const auto& [e, c] : terms) g = int_gcd(g, c);
    return g;
  }

  Polytope newton_polytope() const {
    check_defect(!terms.empty(), "newton_polytope of zero polynomial");
    std::vector<Vec> pts;
    for (const auto& [e, c] : terms) {
      Vec v(nvars);
      for (int i = 0; i < nvars; ++i) v[i] = e[i];
      pts.push_back(std::move(v));
    }
    return convex_hull(pts);
  }
};

namespace detail {

// Exact division for known-multiple dividends (lex leading-term division).
inline std::optional<SparsePoly> divide_exact(const SparsePoly& p, const SparsePoly& d) {
  check_defect(!d.is_zero(), "divide_exact: zero divisor");
  SparsePoly rem = p, q(p.nvars);
  auto lead = d.terms.rbegin();
  while (!rem.is_zero()) {
    auto lt = rem.terms.rbegin();
    std::vector<int> e(p.nvars);
    for (int i = 0; i < p.nvars; ++i) {
      e[i] = lt->first[i] - lead->first[i];
      if (e[i] < 0) return std::nullopt;
    }
    if (lt->second % lead->second != 0) return std::nullopt;
    Int c = lt->second / lead->second;
    SparsePoly t = SparsePoly::monomial(p.nvars, e, c);
    q = q + t;
    rem = rem - t * d;
  }
  return q;
}

}  // namespace detail

// Determinant of a polynomial matrix by fraction-free Bareiss elimination;
// plain cofactor expansion for very small matrices.
inline SparsePoly poly_determinant(std::vector<std::vector<SparsePoly>> m) {
  size_t s = m.size();
  check_defect(s > 0 && m[0].size() == s, "poly_determinant: not square");
  int nv = m[0][0].nvars;
  if (s <= 3) {
    std::function<SparsePoly(std::vector<std::vector<SparsePoly>>&)> cof =
        [&](std::vector<std::vector<SparsePoly>>& a) -> SparsePoly {
      size_t n = a.size();
      if (n == 1) return a[0][0];
      SparsePoly acc(nv);
      for (size_t j = 0; j < n; ++j) {
        if (a[0][j].is_zero()) continue;
        std::vector<std::vector<SparsePoly>> sub;
        for (size_t i = 1; i < n; ++i) {
          std::vector<SparsePoly> row;
          for (size_t l = 0; l < n; ++l)
            if (l != j) row.push_back(a[i][l]);
          sub.push_back(std::move(row));
        }
        SparsePoly minor = cof(sub);
        acc = (j % 2 == 0) ? acc + a[0][j] * minor : acc - a[0][j] * minor;
      }
      return acc;
    };
    return cof(m);
  }
  int sign = 1;
  SparsePoly prev = SparsePoly::constant(nv, 1);
  for (size_t k = 0; k + 1 < s; ++k) {
    if (m[k][k].is_zero()) {
      size_t p = k + 1;
      while (p < s && m[p][k].is_zero()) ++p;
      if (p == s) {
        bool all_zero = true;
        for (size_t i = k; i < s && all_zero; ++i)
          if (!m[i][k].is_zero()) all_zero = false;
        if (all_zero) return SparsePoly(nv);
      }
      check_defect(p < s, "poly_determinant: pivot failure");
      std::swap(m[k], m[p]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < s; ++i)
      for (size_t j = k + 1; j < s; ++j) {
        SparsePoly num = m[k][k] * m[i][j] - m[i][k] * m[k][j];
        auto q = detail::divide_exact(num, prev);
        check_defect(q.has_value(), "poly_determinant: inexact Bareiss division");
        m[i][j] = *q;
      }
    for (size_t i = k + 1; i < s; ++i) m[i][k] = SparsePoly(nv);
    prev = m[k][k];
    if (prev.is_zero()) return SparsePoly(nv);
  }
  SparsePoly det = m[s - 1][s - 1];
  return sign < 0 ? -det : det;
}

// Sylvester resultant of f and g with respect to `var`, entries in the
// sparse coefficient ring.
inline SparsePoly sylvester_resultant(const SparsePoly& f, const SparsePoly& g, int var) {
  int m = f.degree_in(var), n = g.degree_in(var);
  require(m <= 6 && n <= 6, "degree_cap", "sylvester_resultant: degree above cap");
  require(m >= 0 && n >= 0 && !f.is_zero() && !g.is_zero(), "empty_input",
          "sylvester_resultant: zero polynomial");
  int nv = f.nvars;
  if (m == 0 && n == 0) return SparsePoly::constant(nv, 1);
  if (m == 0) return f.pow(n);
  if (n == 0) return g.pow(m);
  size_t s = static_cast<size_t>(m + n);
  std::vector<std::vector<SparsePoly>> mat(s, std::vector<SparsePoly>(s, SparsePoly(nv)));
  for (int r = 0; r < n; ++r)
    for (int j = 0; j <= m; ++j) mat[r][r + j] = f.coefficient_of(var, m - j);
  for (int r = 0; r < m; ++r)
    for (int j = 0; j <= n; ++j) mat[n + r][r + j] = g.coefficient_of(var, n - j);
  return poly_determinant(std::move(mat));
}

// --- Polynomial gcd (primitive PRS) ------------------------------------------

namespace detail {

inline SparsePoly poly_content_in(const SparsePoly& p, int var);
inline SparsePoly poly_gcd(SparsePoly a, SparsePoly b);

inline int top_variable(const SparsePoly& p) {
  for (int v = p.nvars - 1; v >= 0; --v)
    if (p.degree_in(v) > 0) return v;
  return -1;
}

inline SparsePoly poly_content_in(const SparsePoly& p, int var) {
  SparsePoly g(p.nvars);
  for (int d = 0; d <= p.degree_in(var); ++d) {
    SparsePoly c = p.coefficient_of(var, d);
    if (!c.is_zero()) g = poly_gcd(g, c);
  }
  return g;
}

inline SparsePoly poly_gcd(SparsePoly a, SparsePoly b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.is_constant() || b.is_constant()) {
    Int g = int_gcd(a.content(), b.content());
    return SparsePoly::constant(a.nvars, g);
  }
  int va = top_variable(a), vb = top_variable(b);
  int v = std::max(va, vb);
  if (a.degree_in(v) == 0 || b.degree_in(v) == 0) {
    // One side does not involve v: gcd divides its content w.r.t. v.
    SparsePoly ca = a.degree_in(v) == 0 ? a : poly_content_in(a, v);
    SparsePoly cb = b.degree_in(v) == 0 ? b : poly_content_in(b, v);
    return poly_gcd(ca, cb);
  }
  SparsePoly cont_a = poly_content_in(a, v);
  SparsePoly cont_b = poly_content_in(b, v);
  auto pa = divide_exact(a, cont_a);
  auto pb = divide_exact(b, cont_b);
  check_defect(pa && pb, "poly_gcd: content division failed");
  SparsePoly f = *pa, g = *pb;
  // Primitive PRS in v.
  while (true) {
    int df = f.degree_in(v), dg = g.degree_in(v);
    if (dg > df) { std::swap(f, g); std::swap(df, dg); }
    if (g.is_zero()) break;
    if (dg == 0) {
      // A v-free remainder: the primitive parts share only integer content.
      f = SparsePoly::constant(f.nvars, int_gcd(f.content(), g.content()));
      break;
    }
    // Pseudo-remainder of f by g in v.
    SparsePoly r = f;
    SparsePoly lg = g.coefficient_of(v, dg);
    while (!r.is_zero() && r.degree_in(v) >= dg) {
      int dr = r.degree_in(v);
      SparsePoly lr = r.coefficient_of(v, dr);
      std::vector<int> shift(r.nvars, 0);
      shift[v] = dr - dg;
      r = lg * r - SparsePoly::monomial(r.nvars, shift, 1) * lr * g;
    }
    f = g;
    if (r.is_zero()) { g = r; break; }
    SparsePoly rc = poly_content_in(r, v);
    if (rc.is_zero()) rc = SparsePoly::constant(r.nvars, r.content());
    auto rp = divide_exact(r, rc);
    check_defect(rp.has_value(), "poly_gcd: primitive part failed");
    g = *rp;
  }
  SparsePoly gcd_pp = f;
  SparsePoly result = poly_gcd(cont_a, cont_b) * gcd_pp;
  // Canonical sign: positive lex-leading coefficient.
  if (!result.is_zero() && result.terms.rbegin()->second < 0) result = -result;
  return result;
}

inline SparsePoly squarefree_part(const SparsePoly& p) {
  if (p.is_zero() || p.is_constant()) return p;
  SparsePoly g(p.nvars);
  for (int v = 0; v < p.nvars; ++v) {
    if (p.degree_in(v) == 0) continue;
    g = poly_gcd(g, poly_gcd(p, p.derivative(v)));
  }
  if (g.is_zero() || g.is_constant()) {
    auto out = p;
    Int c = out.content();
    if (c != 0 && c != 1) {
      auto q = divide_exact(out, SparsePoly::constant(p.nvars, c));
      check_defect(q.has_value(), "squarefree: content division");
      out = *q;
    }
    if (!out.is_zero() && out.terms.rbegin()->second < 0) out = -out;
    return out;
  }
  auto q = divide_exact(p, g);
  check_defect(q.has_value(), "squarefree: division failed");
  SparsePoly out = *q;
  Int c = out.content();
  if (c != 0 && c != 1) {
    auto qq = divide_exact(out, SparsePoly::constant(p.nvars, c));
    check_defect(qq.has_value(), "squarefree: content division");
    out = *qq;
  }
  if (!out.is_zero() && out.terms.rbegin()->second < 0) out = -out;
  return out;
}

}  // namespace detail

// --- Univariate A-discriminant -------------------------------------------------

struct UnivariateDiscriminant {
  SparsePoly poly;  // in the coefficient variables c_a, sorted point order
  Polytope newton;  // Newton polytope in R^A
  Int degree = 0;
  Int multiplicity = 1;  // the exponent |J| of the irreducible core
};

// The A-discriminant of sum_a c_a y^a for A in Z^1 at desk scale: the
// irreducible core extracted from Res_y(psi, psi'), re-raised to the lattice
// multiplicity |J|.
inline UnivariateDiscriminant univariate_discriminant(const PointConfiguration& a) {
  require(a.dim == 1, "dim_mismatch", "univariate_discriminant: config must be in Z^1");
  require(a.size() <= 6, "degree_cap", "univariate_discriminant: |A| above cap");
  size_t s = a.size();
  int nv = static_cast<int>(s) + 1;  // c_0..c_{s-1}, z
  int zvar = static_cast<int>(s);

  // Multiplicity |J|: index of the lattice spanned by A x {1}.
  IntMatrix lifted(s, 2);
  for (size_t i = 0; i < s; ++i) {
    lifted.at(i, 0) = a.points[i][0];
    lifted.at(i, 1) = 1;
  }
  Int mult = lattice_index(lifted, 2);

  UnivariateDiscriminant out;
  out.multiplicity = mult;

  if (s == 1) {
    out.poly = SparsePoly::variable(nv, 0);
    out.degree = 1;
    std::vector<Vec> pt{Vec{Rat(1)}};
    out.newton = convex_hull(pt);
    return out;
  }

  // Primitive reduction: translate to min 0 and divide exponents by the gcd.
  Int mn = a.points[0][0];
  std::vector<Int> exps;
  Int g = 0;
  for (size_t i = 0; i < s; ++i) {
    Int e = a.points[i][0] - mn;
    exps.push_back(e);
    g = int_gcd(g, e);
  }
  if (g == 0) g = 1;

  SparsePoly psi(nv);
  for (size_t i = 0; i < s; ++i) {
    std::vector<int> e(nv, 0);
    e[static_cast<int>(i)] = 1;
    e[zvar] = static_cast<int>(exps[i] / g);
    psi.add_term(e, 1);
  }
  SparsePoly res = sylvester_resultant(psi, psi.derivative(zvar), zvar);

  // Strip single-variable monomial factors and integer content.
  SparsePoly core = res;
  if (core.is_zero()) core = SparsePoly::constant(nv, 1);
  for (int v = 0; v < nv && !core.is_constant(); ++v) {
    while (true) {
      auto q = detail::divide_exact(core, SparsePoly::variable(nv, v));
      if (!q) break;
      core = *q;
    }
  }
  core = detail::squarefree_part(core);
  if (core.is_zero()) core = SparsePoly::constant(nv, 1);
  check_defect(core.degree_in(zvar) == 0, "univariate_discriminant: z not eliminated");

  SparsePoly d = core.is_constant() ? SparsePoly::constant(nv, 1)
                                    : core.pow(static_cast<int>(mult));
  // Repackage into the coefficient variables only.
  SparsePoly final_poly(static_cast<int>(s));
  for (const auto& [e, c] : d.terms) {
    std::vector<int> f(e.begin(), e.begin() + s);
    final_poly.add_term(f, c);
  }
  out.poly = final_poly;
  out.degree = final_poly.total_degree();
  if (final_poly.is_zero() || final_poly.is_constant()) {
    out.newton = make_point(Vec(s, Rat(0)));
    out.degree = 0;
  } else {
    out.newton = final_poly.newton_polytope();
  }
  return out;
}

}  // namespace polydisc
