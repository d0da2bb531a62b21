#pragma once

// Fiber polytopes by chamber decomposition and mixed fiber polytopes by
// Minkowski polarization. The support-function formula through mixed shadow
// volumes is kept as an independent oracle; it never feeds the constructive
// path and the two are compared in tests.

#include "polydisc/virtual_polytope.hpp"
#include "polydisc/volume.hpp"

namespace polydisc {

// A polytope in R^n (+) R^k whose last k coordinates are the base of the
// projection q.
struct SplitPolytope {
  int n = 0, k = 0;
  Polytope poly;

  int ambient() const { return n + k; }

  Polytope base() const {
    std::vector<int> keep(k);
    for (int i = 0; i < k; ++i) keep[i] = n + i;
    return project_coords(poly, keep);
  }
  Polytope fiber_space_projection() const {
    std::vector<int> keep(n);
    for (int i = 0; i < n; ++i) keep[i] = i;
    return project_coords(poly, keep);
  }
};

inline SplitPolytope make_split(int n, int k, const std::vector<Vec>& points) {
  require(n >= 0 && k >= 0 && n + k > 0, "dim_mismatch", "split: bad dimensions");
  for (const auto& p : points)
    require(static_cast<int>(p.size()) == n + k, "dim_mismatch",
            "split: point dimension mismatch");
  return SplitPolytope{n, k, convex_hull(points)};
}

inline SplitPolytope split_minkowski_sum(const SplitPolytope& a, const SplitPolytope& b) {
  require(a.n == b.n && a.k == b.k, "dim_mismatch", "split sum: split mismatch");
  return SplitPolytope{a.n, a.k, minkowski_sum(a.poly, b.poly)};
}

struct Chamber {
  Polytope chamber;      // subset of the base, in R^k coordinates
  Vec barycenter;        // exact center of mass, in R^k
  Rat normalized_volume; // (1 + dim S)! times lattice Lebesgue volume
};

struct ChamberComplex {
  std::vector<Chamber> chambers;
  int base_span_dim = 0;
};

namespace detail {

// Exact convex polygon utilities on chart coordinates, used to keep the
// planar chamber decomposition away from the general cone machinery.
using Polygon = std::vector<Vec>;  // CCW, consecutive points distinct

inline Rat polygon_area_twice(const Polygon& p) {
  Rat a = 0;
  for (size_t i = 0; i < p.size(); ++i) {
    const Vec& u = p[i];
    const Vec& v = p[(i + 1) % p.size()];
    a += u[0] * v[1] - u[1] * v[0];
  }
  return a;
}

inline Vec polygon_centroid(const Polygon& p) {
  Rat a2 = polygon_area_twice(p);
  check_defect(a2 != 0, "polygon_centroid: degenerate polygon");
  Rat cx = 0, cy = 0;
  for (size_t i = 0; i < p.size(); ++i) {
    const Vec& u = p[i];
    const Vec& v = p[(i + 1) % p.size()];
    Rat w = u[0] * v[1] - u[1] * v[0];
    cx += (u[0] + v[0]) * w;
    cy += (u[1] + v[1]) * w;
  }
  return Vec{cx / (3 * a2), cy / (3 * a2)};
}

inline Polygon polygon_from_2d_hull(const Polytope& p) {
  check_defect(p.ambient == 2 && p.dim == 2, "polygon_from_2d_hull: need a 2-polytope");
  Vec c(2, Rat(0));
  for (const auto& v : p.verts) c = vec_add(c, v);
  c = vec_scale(c, Rat(1) / Rat(static_cast<int>(p.vert_count())));
  Polygon out = p.verts;
  auto half = [&](const Vec& v) {
    Vec d = vec_sub(v, c);
    if (d[1] > 0 || (d[1] == 0 && d[0] > 0)) return 0;
    return 1;
  };
  std::sort(out.begin(), out.end(), [&](const Vec& a, const Vec& b) {
    int ha = half(a), hb = half(b);
    if (ha != hb) return ha < hb;
    Vec da = vec_sub(a, c), db = vec_sub(b, c);
    return da[0] * db[1] - da[1] * db[0] > 0;
  });
  return out;
}

// Split a convex CCW polygon by the line w.y = c; either side may be empty
// or degenerate (dropped).
inline std::pair<std::optional<Polygon>, std::optional<Polygon>> polygon_split(
    const Polygon& poly, const Vec& w, const Rat& c) {
  size_t n = poly.size();
  std::vector<Rat> s(n);
  bool any_pos = false, any_neg = false;
  for (size_t i = 0; i < n; ++i) {
    s[i] = dot(w, poly[i]) - c;
    if (s[i] > 0) any_pos = true;
    if (s[i] < 0) any_neg = true;
  }
  auto pack = [](Polygon g) -> std::optional<Polygon> {
    Polygon out;
    for (const auto& v : g)
      if (out.empty() || out.back() != v) out.push_back(v);
    while (out.size() > 1 && out.front() == out.back()) out.pop_back();
    if (out.size() < 3) return std::nullopt;
    if (polygon_area_twice(out) == 0) return std::nullopt;
    return out;
  };
  if (!any_neg) return {pack(poly), std::nullopt};
  if (!any_pos) return {std::nullopt, pack(poly)};
  Polygon plus, minus;
  for (size_t i = 0; i < n; ++i) {
    size_t j = (i + 1) % n;
    if (s[i] >= 0) plus.push_back(poly[i]);
    if (s[i] <= 0) minus.push_back(poly[i]);
    if ((s[i] > 0 && s[j] < 0) || (s[i] < 0 && s[j] > 0)) {
      Rat t = s[i] / (s[i] - s[j]);
      Vec x = vec_add(poly[i], vec_scale(vec_sub(poly[j], poly[i]), t));
      plus.push_back(x);
      minus.push_back(x);
    }
  }
  return {pack(plus), pack(minus)};
}

// Barycenter + normalized volume per cell, without materializing polytopes.
struct LeanChamber {
  Vec barycenter_chart;  // in chart coordinates
  Rat lebesgue_volume;   // in chart coordinates
  std::vector<Vec> verts_chart;
};

}  // namespace detail

namespace detail {

// Chart of the affine span of the base polytope carrying its lattice to
// Z^d: y-coordinates with x = origin + basis^T y.
struct BaseChart {
  Vec origin;  // in R^k
  Mat basis_t; // k x d, columns form a lattice basis of the direction span
  int d = 0;

  Vec to_chart(const Vec& x) const {
    auto y = solve(basis_t, vec_sub(x, origin));
    check_defect(y.has_value(), "base chart: point outside span");
    return *y;
  }
  Vec from_chart(const Vec& y) const {
    Vec x = origin;
    for (size_t i = 0; i < x.size(); ++i)
      for (int j = 0; j < d; ++j) x[i] += basis_t[i][j] * y[j];
    return x;
  }
};

inline BaseChart base_chart(const Polytope& base) {
  BaseChart c;
  c.origin = base.verts[0];
  c.d = base.dim;
  if (base.dim == 0) {
    c.basis_t = Mat(base.ambient, Vec(0));
    return c;
  }
  std::vector<IntVec> dirs;
  for (size_t i = 1; i < base.vert_count(); ++i)
    dirs.push_back(primitive(vec_sub(base.verts[i], base.verts[0])));
  IntMatrix sat = saturation_basis(IntMatrix(std::move(dirs)));
  check_defect(sat.rows == static_cast<size_t>(base.dim), "base chart: rank");
  c.basis_t = mat_transpose(sat.to_rat());
  return c;
}

}  // namespace detail

namespace detail {

struct Wall {
  IntVec normal;
  Rat offset;
  // For planar bases: the actual projected pieces on this line, so that
  // cells are only split where a wall really passes.
  std::vector<std::pair<Vec, Vec>> segments;
};

// Wall hyperplanes in chart coordinates: every wall is the affine hull of
// the projection of a (bd-1)-dimensional face (a face with the same image
// hull always exists in that skeleton), so only vertices / edges / the
// (bd-1)-skeleton are scanned.
inline std::vector<Wall> chamber_walls(const SplitPolytope& d, const BaseChart& chart) {
  int bd = chart.d;
  std::vector<std::vector<int>> sources;
  sources = d.poly.faces_of_dim(bd - 1);
  std::map<std::pair<std::vector<Int>, Rat>, Wall> walls;
  for (const auto& fverts : sources) {
    std::vector<Vec> proj;
    for (int vi : fverts) {
      Vec x(d.k);
      for (int j = 0; j < d.k; ++j) x[j] = d.poly.verts[vi][d.n + j];
      proj.push_back(chart.to_chart(x));
    }
    std::sort(proj.begin(), proj.end(), lex_less);
    proj.erase(std::unique(proj.begin(), proj.end()), proj.end());
    Mat dirs;
    for (size_t i = 1; i < proj.size(); ++i) dirs.push_back(vec_sub(proj[i], proj[0]));
    if (static_cast<int>(mat_rank(dirs)) != bd - 1) continue;
    Mat normal_space = dirs.empty() ? mat_identity(bd) : kernel_basis(dirs);
    check_defect(normal_space.size() == 1, "chamber walls: normal not unique");
    IntVec w = primitive(normal_space[0]);
    for (const auto& x : w) {
      if (x > 0) break;
      if (x < 0) {
        for (auto& y : w) y = -y;
        break;
      }
    }
    Rat off = dot(to_rat(w), proj[0]);
    auto& wall = walls[{w, off}];
    if (wall.normal.empty()) {
      wall.normal = w;
      wall.offset = off;
    }
    if (bd == 2) wall.segments.emplace_back(proj.front(), proj.back());
  }
  std::vector<Wall> out;
  for (auto& [key, w] : walls) out.push_back(std::move(w));
  return out;
}

// Does any piece of the wall cross the interior band of the polygon? The
// segment is clipped against the polygon's edges; a positive-length
// leftover means the split is real.
inline bool wall_meets_polygon(const Wall& wall, const Polygon& cell) {
  for (const auto& [p, q] : wall.segments) {
    Vec dir = vec_sub(q, p);
    Rat t0 = 0, t1 = 1;
    bool alive = true;
    for (size_t i = 0; i < cell.size() && alive; ++i) {
      const Vec& a = cell[i];
      const Vec& b = cell[(i + 1) % cell.size()];
      // Inward side of edge (a, b) for a CCW polygon: cross(b-a, x-a) >= 0.
      Vec e = vec_sub(b, a);
      Rat f0 = e[0] * (p[1] - a[1]) - e[1] * (p[0] - a[0]);
      Rat fd = e[0] * dir[1] - e[1] * dir[0];
      // Constraint f0 + t * fd >= 0 on [t0, t1].
      if (fd == 0) {
        if (f0 < 0) alive = false;
      } else if (fd > 0) {
        Rat bound = -f0 / fd;
        if (bound > t0) t0 = bound;
      } else {
        Rat bound = -f0 / fd;
        if (bound < t1) t1 = bound;
      }
      if (t0 >= t1) alive = false;
    }
    if (alive && t0 < t1) return true;
  }
  return false;
}

inline std::vector<LeanChamber> lean_chambers(const SplitPolytope& d,
                                              const BaseChart& chart,
                                              const Polytope& base) {
  int bd = chart.d;
  std::vector<LeanChamber> out;
  auto walls = chamber_walls(d, chart);

  if (bd == 1) {
    std::vector<Rat> cuts;
    for (const auto& w : walls) cuts.push_back(w.offset / Rat(w.normal[0]));
    for (const auto& v : base.verts) cuts.push_back(chart.to_chart(v)[0]);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    Rat lo = chart.to_chart(base.verts[0])[0];
    Rat hi = lo;
    for (const auto& v : base.verts) {
      Rat t = chart.to_chart(v)[0];
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
      if (cuts[i] < lo || cuts[i + 1] > hi) continue;
      LeanChamber ch;
      ch.barycenter_chart = Vec{(cuts[i] + cuts[i + 1]) / 2};
      ch.lebesgue_volume = cuts[i + 1] - cuts[i];
      ch.verts_chart = {Vec{cuts[i]}, Vec{cuts[i + 1]}};
      out.push_back(std::move(ch));
    }
    return out;
  }

  if (bd == 2) {
    std::vector<Vec> base_pts;
    for (const auto& v : base.verts) base_pts.push_back(chart.to_chart(v));
    Polygon start = polygon_from_2d_hull(convex_hull(base_pts));
    std::vector<Polygon> cells{start};
    for (const auto& wall : walls) {
      Vec wr = to_rat(wall.normal);
      std::vector<Polygon> next;
      for (auto& cell : cells) {
        if (!wall_meets_polygon(wall, cell)) {
          next.push_back(std::move(cell));
          continue;
        }
        auto [plus, minus] = polygon_split(cell, wr, wall.offset);
        if (plus && minus) {
          next.push_back(std::move(*plus));
          next.push_back(std::move(*minus));
        } else {
          next.push_back(std::move(cell));
        }
      }
      cells = std::move(next);
    }
    for (const auto& cell : cells) {
      LeanChamber ch;
      Rat a2 = polygon_area_twice(cell);
      ch.lebesgue_volume = (a2 < 0 ? -a2 : a2) / 2;
      ch.barycenter_chart = polygon_centroid(cell);
      ch.verts_chart = cell;
      out.push_back(std::move(ch));
    }
    return out;
  }

  // General dimension: halfspace splitting through the cone machinery.
  std::vector<Vec> base_pts;
  for (const auto& v : base.verts) base_pts.push_back(chart.to_chart(v));
  std::vector<Polytope> cells{convex_hull(base_pts)};
  for (const auto& wall : walls) {
    Vec wr = to_rat(wall.normal);
    std::vector<Polytope> next;
    for (const auto& cell : cells) {
      auto lo = truncate_below(cell, wr, wall.offset);
      auto hi = truncate_below(cell, vec_scale(wr, Rat(-1)), -wall.offset);
      if (lo && lo->dim == bd && hi && hi->dim == bd) {
        next.push_back(*lo);
        next.push_back(*hi);
      } else {
        next.push_back(cell);
      }
    }
    cells = std::move(next);
  }
  for (const auto& cell : cells) {
    LeanChamber ch;
    ch.lebesgue_volume = lebesgue_volume(cell);
    ch.barycenter_chart = centroid(cell);
    ch.verts_chart = cell.verts;
    out.push_back(std::move(ch));
  }
  return out;
}

// Fibers over chamber-interior points, solved face by face: every vertex of
// such a fiber lies on a k-face of the polytope whose projection is
// k-dimensional (lower-dimensional projections live inside walls), and on
// that face the preimage of the base point is a single affine solve.
struct FiberSolver {
  int n = 0, k = 0;
  struct KFace {
    std::vector<int> verts;      // spanning vertex ids, k+1 of them
    Mat lambda_inverse;          // (k+1)x(k+1): barycentric solve
    std::vector<Vec> poly2;      // CCW projected polygon (k == 2)
    Rat lo, hi;                  // projected interval (k == 1)
    std::optional<Polytope> region;  // projected hull (k >= 3)
  };
  const SplitPolytope* source = nullptr;
  std::vector<KFace> faces;

  Polytope fiber(const Vec& xbar) const {
    std::vector<Vec> cand;
    for (const auto& f : faces) {
      if (k == 1) {
        if (xbar[0] < f.lo || xbar[0] > f.hi) continue;
      } else if (k == 2) {
        bool inside = true;
        size_t m = f.poly2.size();
        for (size_t i = 0; i < m && inside; ++i) {
          const Vec& a = f.poly2[i];
          const Vec& b = f.poly2[(i + 1) % m];
          Rat cr = (b[0] - a[0]) * (xbar[1] - a[1]) - (b[1] - a[1]) * (xbar[0] - a[0]);
          if (cr < 0) inside = false;
        }
        if (!inside) continue;
      } else {
        if (!f.region->contains(xbar)) continue;
      }
      Vec rhs(k + 1);
      rhs[0] = 1;
      for (int j = 0; j < k; ++j) rhs[j + 1] = xbar[j];
      Vec lambda = mat_apply(f.lambda_inverse, rhs);
      Vec p(n, Rat(0));
      for (int i = 0; i <= k; ++i) {
        const Vec& w = source->poly.verts[f.verts[i]];
        for (int j = 0; j < n; ++j) p[j] += lambda[i] * w[j];
      }
      cand.push_back(std::move(p));
    }
    require(!cand.empty(), "empty_fiber", "fiber solver: point outside every k-face");
    return convex_hull(cand);
  }
};

inline FiberSolver make_fiber_solver(const SplitPolytope& d) {
  FiberSolver s;
  s.n = d.n;
  s.k = d.k;
  s.source = &d;
  std::vector<std::vector<int>> kfaces = d.poly.faces_of_dim(d.k);
  for (const auto& fv : kfaces) {
    // Projected points and a spanning subset.
    std::vector<Vec> proj;
    for (int vi : fv) {
      Vec x(d.k);
      for (int j = 0; j < d.k; ++j) x[j] = d.poly.verts[vi][d.n + j];
      proj.push_back(std::move(x));
    }
    std::vector<int> span_ids{fv[0]};
    Mat difs;
    for (size_t i = 1; i < fv.size() && difs.size() < static_cast<size_t>(d.k); ++i) {
      difs.push_back(vec_sub(proj[i], proj[0]));
      if (mat_rank(difs) != difs.size())
        difs.pop_back();
      else
        span_ids.push_back(fv[i]);
    }
    if (difs.size() != static_cast<size_t>(d.k)) continue;  // projection collapses
    FiberSolver::KFace kf;
    kf.verts = span_ids;
    Mat a(d.k + 1, Vec(d.k + 1));
    for (int col = 0; col <= d.k; ++col) {
      a[0][col] = 1;
      for (int j = 0; j < d.k; ++j)
        a[j + 1][col] = d.poly.verts[span_ids[col]][d.n + j];
    }
    auto inv = mat_inverse(a);
    check_defect(inv.has_value(), "fiber solver: singular barycentric system");
    kf.lambda_inverse = *inv;
    if (d.k == 1) {
      kf.lo = proj[0][0];
      kf.hi = proj[0][0];
      for (const auto& p : proj) {
        kf.lo = std::min(kf.lo, p[0]);
        kf.hi = std::max(kf.hi, p[0]);
      }
    } else if (d.k == 2) {
      kf.poly2 = polygon_from_2d_hull(convex_hull(proj));
    } else {
      kf.region = convex_hull(proj);
    }
    s.faces.push_back(std::move(kf));
  }
  return s;
}

}  // namespace detail

// The chamber complex of the projection: cells on which every fiber vertex
// varies affinely. Cells are cut by the affine hulls of the projections of
// the (dim-1)-skeleton, which refines the classical chamber complex.
inline ChamberComplex chamber_complex(const SplitPolytope& d) {
  ChamberComplex out;
  Polytope base = d.base();
  out.base_span_dim = base.dim;
  if (base.dim == 0) {
    out.chambers.push_back({base, base.verts[0], Rat(1)});
    return out;
  }
  auto chart = detail::base_chart(base);
  Rat norm = Rat(factorial(1 + chart.d));
  for (const auto& lean : detail::lean_chambers(d, chart, base)) {
    Chamber ch;
    ch.normalized_volume = norm * lean.lebesgue_volume;
    ch.barycenter = chart.from_chart(lean.barycenter_chart);
    std::vector<Vec> pts;
    for (const auto& y : lean.verts_chart) pts.push_back(chart.from_chart(y));
    ch.chamber = convex_hull(pts);
    out.chambers.push_back(std::move(ch));
  }
  std::sort(out.chambers.begin(), out.chambers.end(),
            [](const Chamber& a, const Chamber& b) {
              return lex_less(a.barycenter, b.barycenter);
            });
  return out;
}

// Fiber over a base point, projected to the fiber space R^n: the facet
// system of the polytope specialized at the base point, converted back to
// vertices in R^n.
inline Polytope fiber_at(const SplitPolytope& d, const Vec& base_point) {
  int n = d.n;
  Mat ineqs, eqs;
  for (const auto& f : d.poly.facets) {
    Vec row(n + 1, Rat(0));
    row[0] = -f.offset;
    for (int j = 0; j < d.k; ++j) row[0] += Rat(f.normal[n + j]) * base_point[j];
    for (int j = 0; j < n; ++j) row[j + 1] = Rat(f.normal[j]);
    ineqs.push_back(std::move(row));
  }
  for (size_t i = 0; i < d.poly.span_eq_normals.size(); ++i) {
    const Vec& a = d.poly.span_eq_normals[i];
    Vec row(n + 1, Rat(0));
    row[0] = -d.poly.span_eq_offsets[i];
    for (int j = 0; j < d.k; ++j) row[0] += a[n + j] * base_point[j];
    for (int j = 0; j < n; ++j) row[j + 1] = a[j];
    eqs.push_back(std::move(row));
  }
  auto pts = detail::h_to_v(n, ineqs, eqs);
  require(!pts.empty(), "empty_fiber", "fiber_at: base point outside the projection");
  return convex_hull(pts);
}

// The Minkowski integral over the affine span of the projection, with the
// (1 + dim span)! lattice normalization.
inline Polytope fiber_polytope(const SplitPolytope& d) {
  Polytope base = d.base();
  if (base.dim == 0)
    return fiber_at(d, base.verts[0]);
  if (base.dim < d.k) {
    // Rewrite the base in lattice coordinates of its affine span and
    // integrate there; fibers are untouched.
    auto chart0 = detail::base_chart(base);
    std::vector<Vec> pts;
    for (const auto& v : d.poly.verts) {
      Vec b(d.k);
      for (int j = 0; j < d.k; ++j) b[j] = v[d.n + j];
      Vec y = chart0.to_chart(b);
      Vec w(d.n + chart0.d);
      std::copy(v.begin(), v.begin() + d.n, w.begin());
      std::copy(y.begin(), y.end(), w.begin() + d.n);
      pts.push_back(std::move(w));
    }
    return fiber_polytope(make_split(d.n, chart0.d, pts));
  }
  auto chart = detail::base_chart(base);
  Rat norm = Rat(factorial(1 + chart.d));
  auto chambers = detail::lean_chambers(d, chart, base);
  auto solver = detail::make_fiber_solver(d);
  std::vector<std::optional<Polytope>> fibers(chambers.size());
  parallel_for(chambers.size(), [&](size_t i) {
    if (norm * chambers[i].lebesgue_volume == 0) return;
    fibers[i] = solver.fiber(chart.from_chart(chambers[i].barycenter_chart));
  });
  // Point fibers are plain translations and fold into a single shift; the
  // rest is accumulated by balanced pairwise Minkowski summation.
  Vec shift(d.n, Rat(0));
  std::vector<Polytope> parts;
  for (size_t i = 0; i < chambers.size(); ++i) {
    if (!fibers[i]) continue;
    Rat weight = norm * chambers[i].lebesgue_volume;
    if (fibers[i]->is_point())
      shift = vec_add(shift, vec_scale(fibers[i]->verts[0], weight));
    else
      parts.push_back(scale_polytope(*fibers[i], weight));
  }
  parts.push_back(make_point(shift));
  while (parts.size() > 1) {
    std::vector<Polytope> merged((parts.size() + 1) / 2);
    parallel_for(parts.size() / 2, [&](size_t i) {
      merged[i] = minkowski_sum(parts[2 * i], parts[2 * i + 1]);
    });
    if (parts.size() % 2) merged.back() = parts.back();
    parts = std::move(merged);
  }
  return parts[0];
}

// Fixed-base variant: the integral vanishes to the origin when the
// projection is lower-dimensional in R^k (fixed measure on the full base).
inline Polytope fiber_polytope_fixed_base(const SplitPolytope& d) {
  if (d.base().dim < d.k) return make_point(Vec(d.n, Rat(0)));
  return fiber_polytope(d);
}

// Mixed fiber polytope of k+1 split polytopes with a common split, by
// polarization of the fixed-base Minkowski integral:
//   (k+1)! MF = sum over nonempty I of (-1)^(k+1-|I|) Int(sum_{i in I}).
inline Polytope mixed_fiber_polytope(const std::vector<SplitPolytope>& ds) {
  require(!ds.empty(), "empty_input", "mixed_fiber: no arguments");
  int n = ds[0].n, k = ds[0].k;
  for (const auto& d : ds)
    require(d.n == n && d.k == k, "dim_mismatch", "mixed_fiber: split mismatch");
  require(ds.size() == static_cast<size_t>(k + 1), "dim_mismatch",
          "mixed_fiber: need k+1 arguments");

  // Subset sums share work: sum(mask) = sum(mask minus low bit) + that part.
  size_t count = ds.size();
  size_t nsub = (size_t(1) << count) - 1;
  std::vector<std::optional<SplitPolytope>> sums(nsub + 1);
  for (size_t mask = 1; mask <= nsub; ++mask) {
    size_t low = mask & (~mask + 1);
    size_t ilow = static_cast<size_t>(__builtin_ctzll(low));
    if (mask == low)
      sums[mask] = ds[ilow];
    else
      sums[mask] = split_minkowski_sum(*sums[mask ^ low], ds[ilow]);
  }
  if (sums[nsub]->base().dim < k) return make_point(Vec(n, Rat(0)));

  std::vector<std::optional<Polytope>> integrals(nsub + 1);
  parallel_for(nsub, [&](size_t idx) {
    size_t mask = idx + 1;
    integrals[mask] = fiber_polytope_fixed_base(*sums[mask]);
  });

  VirtualPolytope virt(n);
  detail::for_each_subset(count, [&](size_t mask) {
    int bits = __builtin_popcountll(mask);
    Rat coeff = ((count - bits) % 2) ? Rat(-1) : Rat(1);
    virt.add(coeff, *integrals[mask]);
  });
  VirtualPolytope scaled = scale(virt, Rat(1) / Rat(factorial(k + 1)));
  auto res = realize(scaled);
  if (std::holds_alternative<Polytope>(res)) return std::get<Polytope>(res);
  const auto& w = std::get<NotRealizable>(res);
  std::ostringstream os;
  os << "mixed_fiber_polytope: polarization failed to realize; witness rays (";
  for (const auto& x : w.gamma1) os << x << " ";
  os << ") / (";
  for (const auto& x : w.gamma2) os << x << " ";
  os << "); candidate vertices (";
  for (const auto& x : w.v1) os << x << " ";
  os << ") / (";
  for (const auto& x : w.v2) os << x << " ";
  os << ")";
  throw InternalDefect(os.str());
}

// Support-function oracle for the mixed fiber polytope: the min of gamma on
// MF equals -(k+1)! times the mixed shadow volume of the images of the
// arguments under (-gamma, id), bridging the max-convention shadow bodies
// into the min-convention library.
inline Rat mf_support_oracle(const std::vector<SplitPolytope>& ds, const Vec& gamma) {
  require(!ds.empty(), "empty_input", "mf_support_oracle: no arguments");
  int n = ds[0].n, k = ds[0].k;
  require(static_cast<int>(gamma.size()) == n, "dim_mismatch",
          "mf_support_oracle: functional lives on the fiber space");
  std::vector<Polytope> shadows;
  for (const auto& d : ds) {
    require(d.n == n && d.k == k, "dim_mismatch", "mf_support_oracle: split mismatch");
    std::vector<Vec> pts;
    for (const auto& v : d.poly.verts) {
      Vec w(1 + k);
      Rat t = 0;
      for (int i = 0; i < n; ++i) t += gamma[i] * v[i];
      w[0] = -t;  // (-gamma, id) image
      for (int j = 0; j < k; ++j) w[1 + j] = v[n + j];
      pts.push_back(std::move(w));
    }
    shadows.push_back(convex_hull(pts));
  }
  Rat ms = mixed_shadow_volume(shadows);
  return -Rat(factorial(k + 1)) * ms;
}

}  // namespace polydisc
