#pragma once

// Mixed volumes of polytopes and of pairs, shadow volumes, mixed shadow
// volumes, and the combinatorial Euler characteristic built from them.
//
// Two named normalizations appear side by side: Lebesgue (the diagonal gives
// the ordinary volume) and lattice (m! times Lebesgue in lattice
// coordinates). Every function states which one it returns.

#include "polydisc/lp.hpp"
#include "polydisc/parallel.hpp"
#include "polydisc/polytope.hpp"

namespace polydisc {

enum class VolumeNormalization { lebesgue, lattice };

// Subsets of {0..n-1} as bitmasks, skipping the empty set.
namespace detail {

template <class F>
void for_each_subset(size_t n, F&& f) {
  for (size_t mask = 1; mask < (size_t(1) << n); ++mask) f(mask);
}

}  // namespace detail

// Mixed volume of m polytopes in R^m via polarization:
//   m! MV = sum over nonempty I of (-1)^(m-|I|) Vol(sum_{i in I} P_i).
// Lebesgue normalization: MV(P,...,P) = Vol(P).
inline Rat mixed_volume(const std::vector<Polytope>& ps,
                        VolumeNormalization norm = VolumeNormalization::lebesgue) {
  require(!ps.empty(), "empty_input", "mixed_volume: no polytopes");
  size_t m = ps.size();
  for (const auto& p : ps)
    require(p.ambient == static_cast<int>(m), "dim_mismatch",
            "mixed_volume: need m polytopes in R^m");
  size_t total = (size_t(1) << m) - 1;
  std::vector<Rat> vols(total + 1, Rat(0));
  parallel_for(total, [&](size_t idx) {
    size_t mask = idx + 1;
    Polytope acc;
    bool first = true;
    for (size_t i = 0; i < m; ++i)
      if (mask & (size_t(1) << i)) {
        acc = first ? ps[i] : minkowski_sum(acc, ps[i]);
        first = false;
      }
    vols[mask] = lebesgue_volume(acc);
  });
  Rat sum = 0;
  detail::for_each_subset(m, [&](size_t mask) {
    int bits = __builtin_popcountll(mask);
    Rat term = vols[mask];
    if ((m - bits) % 2) term = -term;
    sum += term;
  });
  Rat mv = sum / Rat(factorial(static_cast<int>(m)));
  if (norm == VolumeNormalization::lattice) mv *= Rat(factorial(static_cast<int>(m)));
  return mv;
}

// True iff some subset has dim(sum) < |subset| (the vanishing criterion).
inline bool mv_zero_criterion(const std::vector<Polytope>& ps) {
  size_t m = ps.size();
  bool zero = false;
  detail::for_each_subset(m, [&](size_t mask) {
    if (zero) return;
    Mat dirs;
    int bits = 0;
    for (size_t i = 0; i < m; ++i)
      if (mask & (size_t(1) << i)) {
        ++bits;
        for (size_t v = 1; v < ps[i].vert_count(); ++v)
          dirs.push_back(vec_sub(ps[i].verts[v], ps[i].verts[0]));
      }
    if (static_cast<int>(mat_rank(std::move(dirs))) < bits) zero = true;
  });
  return zero;
}

// --- Polyhedra with a recession cone -----------------------------------------

// bounded + cone, the cone pointed and given by integer ray generators.
struct ConePolyhedron {
  Polytope bounded;
  std::vector<IntVec> rays;  // generators of the recession cone (possibly none)
};

namespace detail {

// H-representation (facets) of bounded + cone, via the homogenization trick:
// the facet normals are the extreme rays of the dual of the cone generated
// by (1, v) and (0, r).
struct HRep {
  Mat ineq_normals;  // rows a with a.x >= offset
  Vec offsets;
};

inline HRep cone_polyhedron_hrep(const ConePolyhedron& cp) {
  int n = cp.bounded.ambient;
  std::vector<IntVec> rows;
  for (const auto& v : cp.bounded.verts) {
    Vec h(n + 1);
    h[0] = 1;
    for (int i = 0; i < n; ++i) h[i + 1] = v[i];
    rows.push_back(primitive(h));
  }
  for (const auto& r : cp.rays) {
    IntVec h(n + 1, Int(0));
    for (int i = 0; i < n; ++i) h[i + 1] = r[i];
    rows.push_back(h);
  }
  // Work modulo the affine span: dualize with span equalities eliminated,
  // otherwise the dual cone has lineality and no extreme rays.
  Mat ineqs;
  for (const auto& r : rows) ineqs.push_back(to_rat(r));
  Mat lin = kernel_basis(ineqs);
  HRep out;
  auto duals = cone_extreme_rays(ineqs, lin);
  for (const auto& l : duals) {
    Vec a(n);
    for (int i = 0; i < n; ++i) a[i] = Rat(l[i + 1]);
    out.ineq_normals.push_back(a);
    out.offsets.push_back(-Rat(l[0]));
  }
  // Span equalities of the polyhedron, as inequality pairs.
  for (const auto& k : lin) {
    Vec a(n);
    for (int i = 0; i < n; ++i) a[i] = k[i + 1];
    if (is_zero(a)) continue;
    Rat off = -k[0];
    out.ineq_normals.push_back(a);
    out.offsets.push_back(off);
    out.ineq_normals.push_back(vec_scale(a, Rat(-1)));
    out.offsets.push_back(-off);
  }
  return out;
}

// bounded + cone intersected with {gamma.x <= c}; empty -> nullopt.
inline std::optional<Polytope> truncate_cone_polyhedron(const ConePolyhedron& cp,
                                                        const Vec& gamma, const Rat& c) {
  int n = cp.bounded.ambient;
  auto h = cone_polyhedron_hrep(cp);
  Mat ineqs;
  for (size_t i = 0; i < h.ineq_normals.size(); ++i) {
    Vec row(n + 1);
    row[0] = -h.offsets[i];
    for (int j = 0; j < n; ++j) row[j + 1] = h.ineq_normals[i][j];
    ineqs.push_back(std::move(row));
  }
  Vec cut(n + 1);
  cut[0] = c;
  for (int j = 0; j < n; ++j) cut[j + 1] = -gamma[j];
  ineqs.push_back(std::move(cut));
  auto pts = h_to_v(n, ineqs, Mat{});
  if (pts.empty()) return std::nullopt;
  return convex_hull(pts);
}

// A functional strictly positive on every nonzero cone ray (interior of the
// dual cone); exists because the recession cone is pointed.
inline Vec interior_dual_functional(const std::vector<IntVec>& rays, int n) {
  if (rays.empty()) return Vec(n, Rat(0));
  Mat a_ge;
  Vec b_ge;
  for (const auto& r : rays) {
    a_ge.push_back(to_rat(r));
    b_ge.push_back(Rat(1));
  }
  auto lp = lp_feasible({}, {}, a_ge, b_ge, n);
  require(lp.feasible, "bad_cone", "recession cone contains a line");
  return lp.witness;
}

}  // namespace detail

struct PolytopePair {
  ConePolyhedron big;
  ConePolyhedron small;
};

// Mixed volume of pairs (Lebesgue): truncate each polyhedron with a halfspace
// beyond all bounded data, then take the difference of classical mixed
// volumes. depth_shift moves the truncation level (the result must not
// depend on it; tests exercise that).
inline Rat mixed_volume_pairs(const std::vector<PolytopePair>& pairs,
                              const std::vector<IntVec>& recession_rays,
                              const Rat& depth_shift = Rat(0)) {
  require(!pairs.empty(), "empty_input", "mixed_volume_pairs: no pairs");
  size_t m = pairs.size();
  int n = pairs[0].big.bounded.ambient;
  require(n == static_cast<int>(m), "dim_mismatch",
          "mixed_volume_pairs: need m pairs in R^m");

  if (recession_rays.empty()) {
    std::vector<Polytope> bigs, smalls;
    for (const auto& pr : pairs) {
      bigs.push_back(pr.big.bounded);
      smalls.push_back(pr.small.bounded);
    }
    return mixed_volume(bigs) - mixed_volume(smalls);
  }

  Vec gamma0 = detail::interior_dual_functional(recession_rays, n);
  Rat c = 1;
  for (const auto& pr : pairs)
    for (const auto* side : {&pr.big, &pr.small})
      for (const auto& v : side->bounded.verts) {
        Rat s = dot(gamma0, v);
        if (s + 1 > c) c = s + 1;
      }
  c += depth_shift;

  // Bounded symmetric difference check: beyond the truncation level the two
  // polyhedra must coincide; compare them on a slab past it.
  for (const auto& pr : pairs) {
    auto bs = detail::truncate_cone_polyhedron(pr.big, gamma0, c + 3);
    auto ss = detail::truncate_cone_polyhedron(pr.small, gamma0, c + 3);
    require(bs.has_value() && ss.has_value(), "empty_polyhedron",
            "mixed_volume_pairs: empty polyhedron in a pair");
    auto bslab = truncate_below(*bs, vec_scale(gamma0, Rat(-1)), -(c + 2));
    auto sslab = truncate_below(*ss, vec_scale(gamma0, Rat(-1)), -(c + 2));
    bool equal = bslab.has_value() == sslab.has_value() &&
                 (!bslab.has_value() || *bslab == *sslab);
    require(equal, "unbounded_difference",
            "mixed_volume_pairs: pair has unbounded symmetric difference");
  }

  std::vector<Polytope> bigs, smalls;
  for (const auto& pr : pairs) {
    auto b = detail::truncate_cone_polyhedron(pr.big, gamma0, c);
    auto s = detail::truncate_cone_polyhedron(pr.small, gamma0, c);
    bigs.push_back(*b);
    smalls.push_back(*s);
  }
  return mixed_volume(bigs) - mixed_volume(smalls);
}

// --- Shadow volumes -----------------------------------------------------------

// Shadow volume of a body in R (+) R^m: the integral over the projection of
// the maximal height function, with plain Lebesgue measure on the base.
// Zero when the projection is lower-dimensional.
inline Rat shadow_volume_lebesgue(const Polytope& b) {
  int m = b.ambient - 1;
  require(m >= 0, "dim_mismatch", "shadow_volume: ambient must be R + R^m");
  std::vector<int> base_coords(m);
  for (int i = 0; i < m; ++i) base_coords[i] = i + 1;
  if (m == 0) {
    // The integral over a point with unit mass: max t.
    Rat mx = b.verts[0][0];
    for (const auto& v : b.verts) mx = std::max(mx, v[0]);
    return mx;
  }
  Polytope base = project_coords(b, base_coords);
  if (base.dim < m) return Rat(0);

  // Height at a fixed base point: the top of the t-interval of the slice.
  auto height = [&](const Vec& x) -> Rat {
    Rat hi;
    bool hi_set = false;
    // Equality constraints pin t exactly when they involve it.
    for (size_t i = 0; i < b.span_eq_normals.size(); ++i) {
      const Vec& a = b.span_eq_normals[i];
      Rat rest = 0;
      for (int j = 0; j < m; ++j) rest += a[j + 1] * x[j];
      if (a[0] != 0) {
        Rat t = (b.span_eq_offsets[i] - rest) / a[0];
        if (!hi_set || t < hi) hi = t;
        hi_set = true;
      }
    }
    for (const auto& f : b.facets) {
      Rat at = Rat(f.normal[0]);
      Rat rest = 0;
      for (int j = 0; j < m; ++j) rest += Rat(f.normal[j + 1]) * x[j];
      if (at < 0) {
        Rat t = (f.offset - rest) / at;
        if (!hi_set || t < hi) hi = t;
        hi_set = true;
      }
    }
    check_defect(hi_set, "shadow_volume: unbounded height");
    return hi;
  };

  if (b.dim <= m) {
    // The body is a graph over its full-dimensional shadow: one cell.
    return lebesgue_volume(base) * height(centroid(base));
  }

  // Full-dimensional body: the upper facets project to cells tiling the base.
  Rat total = 0;
  for (const auto& f : b.facets) {
    if (f.normal[0] >= 0) continue;
    std::vector<Vec> pts;
    for (int vi : f.verts) {
      Vec x(m);
      for (int j = 0; j < m; ++j) x[j] = b.verts[vi][j + 1];
      pts.push_back(std::move(x));
    }
    Polytope cell = convex_hull(pts);
    if (cell.dim < m) continue;
    total += lebesgue_volume(cell) * height(centroid(cell));
  }
  return total;
}

// Shadow volume through a quotient chart on the base: the base coordinates
// are pushed through the chart and the result is scaled by its
// normalization.
inline Rat shadow_volume(const Polytope& b, const QuotientChart& chart) {
  int m = b.ambient - 1;
  require(static_cast<size_t>(m) == chart.ambient_dim, "dim_mismatch",
          "shadow_volume: chart dimension mismatch");
  std::vector<Vec> pts;
  for (const auto& v : b.verts) {
    Vec base(m);
    for (int j = 0; j < m; ++j) base[j] = v[j + 1];
    Vec q = chart.apply(base);
    Vec w(q.size() + 1);
    w[0] = v[0];
    std::copy(q.begin(), q.end(), w.begin() + 1);
    pts.push_back(std::move(w));
  }
  return chart.normalization * shadow_volume_lebesgue(convex_hull(pts));
}

// Mixed shadow volume of m+1 bodies in R (+) R^m (Lebesgue on the base):
//   MS = (1/(m+1)!) sum over nonempty subsets of (-1)^(m+1-p) S(sum).
inline Rat mixed_shadow_volume(const std::vector<Polytope>& bs) {
  require(!bs.empty(), "empty_input", "mixed_shadow_volume: no bodies");
  size_t count = bs.size();
  int m = bs[0].ambient - 1;
  require(count == static_cast<size_t>(m + 1), "dim_mismatch",
          "mixed_shadow_volume: need m+1 bodies in R + R^m");
  size_t total = (size_t(1) << count) - 1;
  std::vector<Rat> vals(total + 1, Rat(0));
  parallel_for(total, [&](size_t idx) {
    size_t mask = idx + 1;
    Polytope acc;
    bool first = true;
    for (size_t i = 0; i < count; ++i)
      if (mask & (size_t(1) << i)) {
        acc = first ? bs[i] : minkowski_sum(acc, bs[i]);
        first = false;
      }
    vals[mask] = shadow_volume_lebesgue(acc);
  });
  Rat sum = 0;
  detail::for_each_subset(count, [&](size_t mask) {
    int p = __builtin_popcountll(mask);
    Rat term = vals[mask];
    if ((count - p) % 2) term = -term;
    sum += term;
  });
  return sum / Rat(factorial(static_cast<int>(count)));
}

// --- Euler characteristic of a Milnor fiber (combinatorial value) -------------

namespace detail {

template <class F>
void for_each_composition(int total, int parts, std::vector<int>& cur, F&& f) {
  if (parts == 1) {
    if (total >= 1) {
      cur.push_back(total);
      f(cur);
      cur.pop_back();
    }
    return;
  }
  for (int a = 1; a + (parts - 1) <= total; ++a) {
    cur.push_back(a);
    for_each_composition(total - a, parts - 1, cur, f);
    cur.pop_back();
  }
}

}  // namespace detail

// (-1)^(m-k) m! sum over positive compositions a of m into k parts of the
// mixed volume of pairs with pair_i repeated a_i times. Exact integer.
inline Int milnor_fiber_euler(const std::vector<PolytopePair>& pairs,
                              const std::vector<IntVec>& recession_rays, int m) {
  int k = static_cast<int>(pairs.size());
  require(k >= 1 && k <= m, "dim_mismatch", "milnor_fiber_euler: need 1 <= k <= m");
  Rat sum = 0;
  std::vector<int> cur;
  detail::for_each_composition(m, k, cur, [&](const std::vector<int>& a) {
    std::vector<PolytopePair> args;
    for (int i = 0; i < k; ++i)
      for (int rep = 0; rep < a[i]; ++rep) args.push_back(pairs[i]);
    sum += mixed_volume_pairs(args, recession_rays);
  });
  Rat value = Rat(factorial(m)) * sum;
  if ((m - k) % 2) value = -value;
  check_defect(rat_den(value) == 1, "milnor_fiber_euler: non-integer value");
  return rat_num(value);
}

}  // namespace polydisc
