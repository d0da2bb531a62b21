#pragma once

// Normal fans and their common refinements. Cones are kept in V-representation
// (extreme rays plus a lineality basis); lower-dimensional polytopes get fans
// whose cones all share the lineality span(P)^perp.

#include "polydisc/polytope.hpp"

namespace polydisc {

struct Cone {
  std::vector<IntVec> rays;       // primitive extreme rays, sorted
  std::vector<IntVec> lineality;  // HNF-canonical basis of the lineality space
  int dim = 0;

  bool operator==(const Cone& o) const {
    return rays == o.rays && lineality == o.lineality;
  }
  bool operator<(const Cone& o) const {
    if (lineality != o.lineality) return lineality < o.lineality;
    return rays < o.rays;
  }
};

namespace detail {

inline std::vector<IntVec> canonical_lineality(const Mat& basis_rows) {
  if (basis_rows.empty()) return {};
  std::vector<IntVec> prim;
  for (const auto& r : basis_rows) prim.push_back(primitive(r));
  IntMatrix sat = saturation_basis(IntMatrix(prim));
  auto [h, u] = hermite_form(sat);
  std::vector<IntVec> out;
  for (size_t i = 0; i < h.rows; ++i) {
    bool z = std::all_of(h.entries[i].begin(), h.entries[i].end(),
                         [](const Int& x) { return x == 0; });
    if (!z) out.push_back(h.entries[i]);
  }
  return out;
}

// V-representation of {y : row·y >= 0 for all rows}, lineality allowed.
inline Cone cone_from_inequalities(const Mat& ineq_rows, size_t ambient) {
  Cone c;
  Mat lin = ineq_rows.empty() ? mat_identity(ambient) : kernel_basis(ineq_rows);
  c.lineality = canonical_lineality(lin);
  if (ineq_rows.empty()) {
    c.dim = static_cast<int>(ambient);
    return c;
  }
  // Parameterize modulo lineality by independent rows of the system.
  Mat basis;
  for (const auto& r : ineq_rows) {
    basis.push_back(r);
    if (mat_rank(basis) != basis.size()) basis.pop_back();
  }
  size_t r = basis.size();
  if (r > 0) {
    Mat bt = mat_transpose(basis);  // ambient x r
    std::vector<IntVec> reduced;
    for (const auto& a : ineq_rows) {
      Vec row(r, Rat(0));
      for (size_t j = 0; j < r; ++j)
        for (size_t i = 0; i < ambient; ++i) row[j] += a[i] * bt[i][j];
      reduced.push_back(primitive(row));
    }
    std::vector<IntVec> nz;
    for (auto& x : reduced)
      if (!std::all_of(x.begin(), x.end(), [](const Int& v) { return v == 0; }))
        nz.push_back(std::move(x));
    if (!nz.empty()) {
      auto rays_t = detail::ddm_pointed(nz);
      for (const auto& t : rays_t) {
        Vec amb(ambient, Rat(0));
        for (size_t i = 0; i < ambient; ++i)
          for (size_t j = 0; j < r; ++j) amb[i] += bt[i][j] * Rat(t[j]);
        c.rays.push_back(primitive(amb));
      }
      std::sort(c.rays.begin(), c.rays.end());
    }
  }
  Mat span;
  for (const auto& v : c.rays) span.push_back(to_rat(v));
  for (const auto& v : c.lineality) span.push_back(to_rat(v));
  c.dim = static_cast<int>(mat_rank(std::move(span)));
  return c;
}

}  // namespace detail

struct NormalFan {
  int ambient = 0;
  std::vector<Cone> maximal;  // vertex normal cones, sorted canonically
};

// Normal cone (min convention) of the vertex with index vi.
inline Cone vertex_normal_cone(const Polytope& p, size_t vi) {
  Mat rows;
  for (size_t u = 0; u < p.vert_count(); ++u) {
    if (u == vi) continue;
    rows.push_back(vec_sub(p.verts[u], p.verts[vi]));
  }
  return detail::cone_from_inequalities(rows, p.ambient);
}

inline NormalFan normal_fan(const Polytope& p) {
  NormalFan f;
  f.ambient = p.ambient;
  for (size_t i = 0; i < p.vert_count(); ++i) f.maximal.push_back(vertex_normal_cone(p, i));
  std::sort(f.maximal.begin(), f.maximal.end());
  return f;
}

inline bool operator==(const NormalFan& a, const NormalFan& b) {
  return a.ambient == b.ambient && a.maximal == b.maximal;
}

namespace detail {

// H-representation rows of a cone given in V-representation: the extreme
// rays of its dual, computed with the lineality forced into the kernel.
inline Mat cone_hrep(const Cone& c, int ambient) {
  Mat ineqs;
  for (const auto& r : c.rays) ineqs.push_back(to_rat(r));
  Mat eqs;
  for (const auto& l : c.lineality) eqs.push_back(to_rat(l));
  if (ineqs.empty() && eqs.empty()) return {Vec(ambient, Rat(0))};
  auto rows = cone_extreme_rays(ineqs.empty() ? Mat{Vec(ambient, Rat(0))} : ineqs, eqs);
  Mat out;
  for (const auto& r : rows) out.push_back(to_rat(r));
  // A cone of dimension < ambient also needs its span equalities, expressed
  // as opposite inequality pairs.
  Mat span;
  for (const auto& r : c.rays) span.push_back(to_rat(r));
  for (const auto& l : c.lineality) span.push_back(to_rat(l));
  Mat perp = span.empty() ? mat_identity(ambient) : kernel_basis(span);
  for (const auto& a : perp) {
    out.push_back(a);
    out.push_back(vec_scale(a, Rat(-1)));
  }
  return out;
}

}  // namespace detail

// Common refinement: full-dimensional intersections of maximal cones, one
// from each fan.
inline NormalFan common_refinement(const std::vector<NormalFan>& fans) {
  check_defect(!fans.empty(), "common_refinement: no fans");
  int ambient = fans[0].ambient;
  std::vector<Mat> current{Mat{}};
  for (const auto& fan : fans) {
    std::vector<Mat> next;
    for (const auto& partial : current)
      for (const auto& cone : fan.maximal) {
        Mat join = partial;
        Mat h = detail::cone_hrep(cone, ambient);
        join.insert(join.end(), h.begin(), h.end());
        next.push_back(std::move(join));
      }
    current = std::move(next);
  }
  std::set<Cone> cones;
  for (const auto& h : current) {
    Cone c = detail::cone_from_inequalities(h, ambient);
    if (c.dim == ambient) cones.insert(c);
  }
  NormalFan out;
  out.ambient = ambient;
  out.maximal.assign(cones.begin(), cones.end());
  return out;
}

}  // namespace polydisc
