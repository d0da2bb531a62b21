#pragma once

// Exact V-representation polytopes over the rationals.
//
// The single geometric kernel is a double description method (DDM) computing
// the extreme rays of a pointed cone {y : A y >= 0}. Run on homogenized
// points it yields facets (the convex hull); run on homogenized facet
// inequalities it yields vertices (halfspace truncation, slicing). The
// combinatorial adjacency test is used with exactly maintained tight sets,
// so degenerate inputs need no special cases.

#include "polydisc/int_matrix.hpp"
#include "polydisc/linalg.hpp"
#include "polydisc/rational.hpp"

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <set>

namespace polydisc {

namespace detail {

struct Bitset {
  std::vector<uint64_t> w;
  explicit Bitset(size_t n = 0) : w((n + 63) / 64, 0) {}
  void set(size_t i) { w[i / 64] |= uint64_t(1) << (i % 64); }
  bool test(size_t i) const { return (w[i / 64] >> (i % 64)) & 1; }
  static Bitset and_(const Bitset& a, const Bitset& b) {
    Bitset r;
    r.w.resize(std::min(a.w.size(), b.w.size()));
    for (size_t i = 0; i < r.w.size(); ++i) r.w[i] = a.w[i] & b.w[i];
    return r;
  }
  // this superset-of other?
  bool contains(const Bitset& o) const {
    for (size_t i = 0; i < o.w.size(); ++i) {
      uint64_t ow = o.w[i];
      uint64_t tw = i < w.size() ? w[i] : 0;
      if ((ow & tw) != ow) return false;
    }
    return true;
  }
};

inline Int dot_int(const IntVec& a, const IntVec& b) {
  Int s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Extreme rays of the pointed cone {y : row·y >= 0 for all rows}.
// Rows are primitivized; rays come back as primitive integer vectors.
// Throws if the cone has a nontrivial lineality space (callers guarantee
// pointedness; a violation is a defect).
inline std::vector<IntVec> ddm_pointed(const std::vector<IntVec>& rows_in) {
  size_t dim = rows_in.empty() ? 0 : rows_in[0].size();
  check_defect(dim > 0, "ddm: zero-dimensional input");
  std::vector<IntVec> rows = rows_in;

  // Initial invertible subset.
  std::vector<size_t> init;
  {
    Mat acc;
    for (size_t i = 0; i < rows.size() && init.size() < dim; ++i) {
      acc.push_back(to_rat(rows[i]));
      if (mat_rank(acc) == acc.size())
        init.push_back(i);
      else
        acc.pop_back();
    }
    check_defect(init.size() == dim, "ddm: cone is not pointed");
  }

  struct Ray {
    IntVec v;
    Bitset tight;
  };

  size_t m = rows.size();
  std::vector<Ray> rays;
  std::vector<bool> processed(m, false);
  {
    Mat a0(dim, Vec(dim));
    for (size_t i = 0; i < dim; ++i) a0[i] = to_rat(rows[init[i]]);
    auto inv = mat_inverse(a0);
    check_defect(inv.has_value(), "ddm: initial block not invertible");
    for (size_t j = 0; j < dim; ++j) {
      Vec col(dim);
      for (size_t i = 0; i < dim; ++i) col[i] = (*inv)[i][j];
      Ray r{primitive(col), Bitset(m)};
      rays.push_back(std::move(r));
    }
    for (size_t i : init) processed[i] = true;
    for (auto& r : rays)
      for (size_t i : init)
        if (dot_int(rows[i], r.v) == 0) r.tight.set(i);
  }

  auto ray_key = [](const IntVec& v) {
    std::string k;
    for (const auto& x : v) { k += x.str(); k += ','; }
    return k;
  };

  for (size_t t = 0; t < m; ++t) {
    if (processed[t]) continue;
    processed[t] = true;
    const IntVec& a = rows[t];
    std::vector<Int> s(rays.size());
    bool any_neg = false;
    for (size_t i = 0; i < rays.size(); ++i) {
      s[i] = dot_int(a, rays[i].v);
      if (s[i] < 0) any_neg = true;
    }
    if (!any_neg) {
      for (size_t i = 0; i < rays.size(); ++i)
        if (s[i] == 0) rays[i].tight.set(t);
      continue;
    }
    std::vector<size_t> pos, neg, zero;
    for (size_t i = 0; i < rays.size(); ++i)
      (s[i] > 0 ? pos : s[i] < 0 ? neg : zero).push_back(i);

    std::vector<Ray> next;
    std::set<std::string> seen;
    for (size_t i : pos) {
      next.push_back(rays[i]);
      seen.insert(ray_key(rays[i].v));
    }
    for (size_t i : zero) {
      rays[i].tight.set(t);
      next.push_back(rays[i]);
      seen.insert(ray_key(rays[i].v));
    }
    for (size_t p : pos)
      for (size_t n : neg) {
        Bitset common = Bitset::and_(rays[p].tight, rays[n].tight);
        bool adjacent = true;
        for (size_t o = 0; o < rays.size() && adjacent; ++o) {
          if (o == p || o == n) continue;
          if (rays[o].tight.contains(common)) adjacent = false;
        }
        if (!adjacent) continue;
        IntVec nv(dim);
        for (size_t c = 0; c < dim; ++c)
          nv[c] = s[p] * rays[n].v[c] - s[n] * rays[p].v[c];
        Vec nr = to_rat(nv);
        IntVec cand = primitive(nr);
        auto key = ray_key(cand);
        if (seen.count(key)) continue;
        seen.insert(key);
        Ray r{cand, Bitset(m)};
        for (size_t i = 0; i < m; ++i)
          if (processed[i] && dot_int(rows[i], r.v) == 0) r.tight.set(i);
        next.push_back(std::move(r));
      }
    rays = std::move(next);
  }
  std::vector<IntVec> out;
  out.reserve(rays.size());
  for (auto& r : rays) out.push_back(std::move(r.v));
  return out;
}

// Extreme rays of {y : A y >= 0, E y = 0}. Equalities are eliminated by
// parameterizing the kernel; rays are mapped back to the ambient space.
inline std::vector<IntVec> cone_extreme_rays(const Mat& ineqs, const Mat& eqs) {
  size_t dim = 0;
  if (!ineqs.empty()) dim = ineqs[0].size();
  else if (!eqs.empty()) dim = eqs[0].size();
  check_defect(dim > 0, "cone_extreme_rays: empty system");

  Mat basis_cols = mat_identity(dim);
  if (!eqs.empty()) {
    Mat n = kernel_basis(eqs);  // rows span kernel
    if (n.empty()) return {};   // only the origin
    basis_cols = mat_transpose(n);
  }
  size_t rdim = basis_cols[0].size();
  std::vector<IntVec> rows;
  rows.reserve(ineqs.size());
  for (const auto& a : ineqs) {
    Vec reduced(rdim, Rat(0));
    for (size_t j = 0; j < rdim; ++j)
      for (size_t i = 0; i < dim; ++i) reduced[j] += a[i] * basis_cols[i][j];
    rows.push_back(primitive(reduced));
  }
  // Drop zero rows (constraints vanishing on the kernel).
  std::vector<IntVec> nz;
  for (auto& r : rows) {
    bool z = std::all_of(r.begin(), r.end(), [](const Int& x) { return x == 0; });
    if (!z) nz.push_back(std::move(r));
  }
  if (nz.empty()) {
    // Whole subspace: pointed only if 0-dimensional.
    check_defect(rdim == 0, "cone_extreme_rays: cone is a subspace");
    return {};
  }
  auto reduced_rays = ddm_pointed(nz);
  std::vector<IntVec> out;
  for (const auto& r : reduced_rays) {
    Vec amb(dim, Rat(0));
    for (size_t i = 0; i < dim; ++i)
      for (size_t j = 0; j < rdim; ++j) amb[i] += basis_cols[i][j] * Rat(r[j]);
    out.push_back(primitive(amb));
  }
  return out;
}

}  // namespace detail

// A supporting halfspace {x : normal·x >= offset}, tight exactly on a facet.
struct Facet {
  IntVec normal;  // primitive inner normal (ambient coordinates)
  Rat offset;
  std::vector<int> verts;  // indices of incident vertices, sorted
};

struct PolyFace {
  std::vector<int> verts;  // sorted vertex indices
  int dim = -1;
};

class Polytope;
Polytope convex_hull(const std::vector<Vec>& points);

class Polytope {
 public:
  int ambient = 0;
  int dim = -1;
  std::vector<Vec> verts;            // extreme points, sorted lex
  std::vector<Facet> facets;         // empty iff dim <= 0
  Mat span_eq_normals;               // rows a with a·x constant on the polytope
  Vec span_eq_offsets;               // matching constants

  Polytope() = default;

  bool is_point() const { return dim == 0; }
  const Vec& vertex(size_t i) const { return verts[i]; }
  size_t vert_count() const { return verts.size(); }

  bool operator==(const Polytope& o) const { return verts == o.verts; }
  bool operator!=(const Polytope& o) const { return !(*this == o); }

  bool contains(const Vec& x) const {
    for (size_t i = 0; i < span_eq_normals.size(); ++i)
      if (dot(span_eq_normals[i], x) != span_eq_offsets[i]) return false;
    for (const auto& f : facets) {
      Rat s = 0;
      for (int i = 0; i < ambient; ++i) s += Rat(f.normal[i]) * x[i];
      if (s < f.offset) return false;
    }
    return true;
  }

  // Face lattice (all faces including the polytope itself; no empty face),
  // computed once on demand. Sorted by (dim, lex vertex list).
  const std::vector<PolyFace>& faces() const {
    std::call_once(cache_->faces_once, [this] { build_faces(); });
    return cache_->faces;
  }

  // Pairs of vertex indices forming 1-faces.
  const std::vector<std::array<int, 2>>& edges() const {
    std::call_once(cache_->edges_once, [this] { build_edges(); });
    return cache_->edges;
  }

  // Simplices (vertex index tuples, each of size dim+1) triangulating the
  // polytope, computed once on demand.
  const std::vector<std::vector<int>>& triangulation() const {
    std::call_once(cache_->tri_once, [this] { build_triangulation(); });
    return cache_->tri;
  }

  // Vertex sets of the faces of one fixed dimension, built bottom-up from
  // the edge graph (cheaper than the full lattice for large polytopes).
  std::vector<std::vector<int>> faces_of_dim(int d) const;

 private:
  friend Polytope convex_hull(const std::vector<Vec>&);

  struct Cache {
    std::once_flag faces_once, edges_once, tri_once;
    std::vector<PolyFace> faces;
    std::vector<std::array<int, 2>> edges;
    std::vector<std::vector<int>> tri;
  };
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();

  std::vector<detail::Bitset> vertex_tight_sets() const {
    std::vector<detail::Bitset> tight(verts.size(), detail::Bitset(facets.size()));
    for (size_t fi = 0; fi < facets.size(); ++fi)
      for (int vi : facets[fi].verts) tight[vi].set(fi);
    return tight;
  }

  void build_faces() const;
  void build_edges() const;
  void build_triangulation() const;
};

namespace detail {

inline int affine_dim(const std::vector<Vec>& pts) {
  if (pts.empty()) return -1;
  Mat difs;
  for (size_t i = 1; i < pts.size(); ++i) difs.push_back(vec_sub(pts[i], pts[0]));
  return static_cast<int>(mat_rank(std::move(difs)));
}

}  // namespace detail

inline Polytope convex_hull(const std::vector<Vec>& points) {
  require(!points.empty(), "empty_input", "convex_hull: empty point list");
  size_t n = points[0].size();
  for (const auto& p : points)
    require(p.size() == n, "dim_mismatch", "convex_hull: inconsistent dimensions");

  std::vector<Vec> pts = points;
  std::sort(pts.begin(), pts.end(), lex_less);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  Polytope p;
  p.ambient = static_cast<int>(n);

  // Affine span basis from differences.
  const Vec& base = pts[0];
  Mat span_rows;  // rows: independent direction vectors
  for (size_t i = 1; i < pts.size(); ++i) {
    Vec d = vec_sub(pts[i], base);
    span_rows.push_back(d);
    if (mat_rank(span_rows) != span_rows.size()) span_rows.pop_back();
  }
  int d = static_cast<int>(span_rows.size());
  p.dim = d;

  // Affine-hull equalities: normals annihilating every direction vector.
  {
    Mat k = span_rows.empty() ? mat_identity(n) : kernel_basis(span_rows);
    for (auto& a : k) {
      IntVec ai = primitive(a);
      Vec ar = to_rat(ai);
      p.span_eq_normals.push_back(ar);
      p.span_eq_offsets.push_back(dot(ar, base));
    }
  }

  if (d == 0) {
    p.verts = {pts[0]};
    return p;
  }

  // Span coordinates: T (d x n) with T * span_rows^T = I.
  Mat s_cols = mat_transpose(span_rows);             // n x d
  Mat gram = mat_mul(span_rows, s_cols);             // d x d, invertible
  auto gram_inv = mat_inverse(gram);
  check_defect(gram_inv.has_value(), "hull: singular Gram matrix");
  Mat t_map = mat_mul(*gram_inv, span_rows);         // d x n
  auto to_span = [&](const Vec& x) { return mat_apply(t_map, vec_sub(x, base)); };

  std::vector<Vec> y(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) y[i] = to_span(pts[i]);

  // Facets = extreme rays of the dual cone {l : l·(1, y_i) >= 0}.
  std::vector<IntVec> rows(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) {
    Vec h(d + 1);
    h[0] = 1;
    for (int j = 0; j < d; ++j) h[j + 1] = y[i][j];
    rows[i] = primitive(h);
  }
  auto duals = detail::ddm_pointed(rows);

  // Identify vertices: a point is extreme iff its tight dual rays span R^d.
  std::vector<std::vector<size_t>> tight_at(pts.size());
  for (size_t r = 0; r < duals.size(); ++r)
    for (size_t i = 0; i < pts.size(); ++i)
      if (detail::dot_int(duals[r], rows[i]) == 0) tight_at[i].push_back(r);
  std::vector<int> vert_of_pt(pts.size(), -1);
  std::vector<Vec> vert_list;
  std::vector<Vec> y_of_vert;
  for (size_t i = 0; i < pts.size(); ++i) {
    if (tight_at[i].size() < static_cast<size_t>(d)) continue;
    Mat m;
    for (size_t r : tight_at[i]) {
      Vec lin(d);
      for (int j = 0; j < d; ++j) lin[j] = Rat(duals[r][j + 1]);
      m.push_back(std::move(lin));
    }
    if (mat_rank(std::move(m)) == static_cast<size_t>(d)) {
      vert_of_pt[i] = static_cast<int>(vert_list.size());
      vert_list.push_back(pts[i]);
      y_of_vert.push_back(y[i]);
    }
  }
  p.verts = vert_list;  // already lex sorted since pts was sorted

  // Lift facet normals to ambient coordinates.
  for (const auto& l : duals) {
    Vec span_normal(d);
    for (int j = 0; j < d; ++j) span_normal[j] = Rat(l[j + 1]);
    Vec amb(n, Rat(0));
    for (size_t i = 0; i < n; ++i)
      for (int j = 0; j < d; ++j) amb[i] += t_map[j][i] * span_normal[j];
    Facet f;
    f.normal = primitive(amb);
    // Rescale offset to the primitive normal: find scale via a tight vertex.
    // l0 + l·y = 0 on the facet; in ambient terms normal·x = offset there.
    Rat off;
    bool off_set = false;
    for (size_t vi = 0; vi < vert_list.size(); ++vi) {
      Rat val = Rat(l[0]) + dot(span_normal, y_of_vert[vi]);
      if (val == 0) {
        Rat s = 0;
        for (size_t c = 0; c < n; ++c) s += Rat(f.normal[c]) * vert_list[vi][c];
        if (!off_set) { off = s; off_set = true; }
        f.verts.push_back(static_cast<int>(vi));
      }
    }
    check_defect(off_set, "hull: facet without incident vertex");
    f.offset = off;
    std::sort(f.verts.begin(), f.verts.end());
    p.facets.push_back(std::move(f));
  }
  // Deterministic facet order.
  std::sort(p.facets.begin(), p.facets.end(), [](const Facet& a, const Facet& b) {
    return a.verts < b.verts;
  });
  return p;
}

inline void Polytope::build_faces() const {
  auto& out = cache_->faces;
  if (dim <= 0) {
    out.push_back(PolyFace{{0}, 0});
    return;
  }
  size_t nv = verts.size();
  std::set<std::vector<int>> known;
  std::vector<std::vector<int>> queue;
  std::vector<int> full(nv);
  for (size_t i = 0; i < nv; ++i) full[i] = static_cast<int>(i);
  known.insert(full);
  queue.push_back(full);
  for (const auto& f : facets) {
    if (known.insert(f.verts).second) queue.push_back(f.verts);
  }
  // Close under pairwise intersection.
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    auto cur = queue[qi];
    for (const auto& f : facets) {
      std::vector<int> inter;
      std::set_intersection(cur.begin(), cur.end(), f.verts.begin(), f.verts.end(),
                            std::back_inserter(inter));
      if (inter.empty()) continue;
      if (known.insert(inter).second) queue.push_back(inter);
    }
  }
  for (const auto& vs : known) {
    std::vector<Vec> sub;
    for (int i : vs) sub.push_back(verts[i]);
    out.push_back(PolyFace{vs, detail::affine_dim(sub)});
  }
  std::sort(out.begin(), out.end(), [](const PolyFace& a, const PolyFace& b) {
    if (a.dim != b.dim) return a.dim < b.dim;
    return a.verts < b.verts;
  });
}

inline void Polytope::build_edges() const {
  auto& out = cache_->edges;
  if (dim < 1) return;
  size_t nv = verts.size();
  if (dim == 1) {
    out.push_back({0, static_cast<int>(nv - 1)});
    return;
  }
  auto tight = vertex_tight_sets();
  for (size_t u = 0; u < nv; ++u)
    for (size_t v = u + 1; v < nv; ++v) {
      auto common = detail::Bitset::and_(tight[u], tight[v]);
      // The face generated by {u, v} is the set of vertices tight on all
      // common facets; it is an edge iff that set is exactly {u, v}.
      bool edge = true;
      for (size_t w = 0; w < nv && edge; ++w) {
        if (w == u || w == v) continue;
        if (tight[w].contains(common)) edge = false;
      }
      if (!edge) continue;
      // And the common facet normals must cut down to dimension 1.
      Mat m;
      for (size_t fi = 0; fi < facets.size(); ++fi)
        if (common.test(fi)) m.push_back(to_rat(facets[fi].normal));
      for (const auto& a : span_eq_normals) m.push_back(a);
      if (mat_rank(std::move(m)) == static_cast<size_t>(ambient - 1))
        out.push_back({static_cast<int>(u), static_cast<int>(v)});
    }
}

inline void Polytope::build_triangulation() const {
  auto& out = cache_->tri;
  if (dim == 0) {
    out.push_back({0});
    return;
  }
  if (dim == 1) {
    out.push_back({0, static_cast<int>(verts.size() - 1)});
    return;
  }
  // Cone the lex-min vertex (index 0) over triangulations of the facets
  // that do not contain it.
  for (const auto& f : facets) {
    if (std::find(f.verts.begin(), f.verts.end(), 0) != f.verts.end()) continue;
    std::vector<Vec> fpts;
    for (int vi : f.verts) fpts.push_back(verts[vi]);
    Polytope fp = convex_hull(fpts);
    for (const auto& s : fp.triangulation()) {
      std::vector<int> simplex{0};
      for (int si : s) {
        const Vec& v = fp.verts[si];
        auto it = std::lower_bound(verts.begin(), verts.end(), v, lex_less);
        check_defect(it != verts.end() && *it == v, "triangulation: vertex lookup");
        simplex.push_back(static_cast<int>(it - verts.begin()));
      }
      out.push_back(std::move(simplex));
    }
  }
}

inline std::vector<std::vector<int>> Polytope::faces_of_dim(int d) const {
  std::vector<std::vector<int>> out;
  if (d < 0 || d > dim) return out;
  if (d == dim) {
    std::vector<int> full(verts.size());
    for (size_t i = 0; i < verts.size(); ++i) full[i] = static_cast<int>(i);
    out.push_back(full);
    return out;
  }
  if (d == 0) {
    for (size_t i = 0; i < verts.size(); ++i) out.push_back({static_cast<int>(i)});
    return out;
  }
  auto tight = vertex_tight_sets();
  auto verts_of = [&](const detail::Bitset& common) {
    std::vector<int> vs;
    for (size_t w = 0; w < verts.size(); ++w)
      if (tight[w].contains(common)) vs.push_back(static_cast<int>(w));
    return vs;
  };
  auto face_dim = [&](const std::vector<int>& vs) {
    std::vector<Vec> pts;
    for (int i : vs) pts.push_back(verts[i]);
    return detail::affine_dim(pts);
  };
  // Level sets grown by closing (previous face + one vertex).
  std::vector<std::vector<int>> level;
  if (dim >= 1) {
    level.clear();
    for (const auto& e : edges()) level.push_back({e[0], e[1]});
  }
  for (int cur = 1; cur < d; ++cur) {
    std::set<std::vector<int>> next;
    for (const auto& f : level) {
      detail::Bitset common = tight[f[0]];
      for (size_t i = 1; i < f.size(); ++i)
        common = detail::Bitset::and_(common, tight[f[i]]);
      for (size_t w = 0; w < verts.size(); ++w) {
        if (std::binary_search(f.begin(), f.end(), static_cast<int>(w))) continue;
        detail::Bitset c2 = detail::Bitset::and_(common, tight[w]);
        auto vs = verts_of(c2);
        if (face_dim(vs) == cur + 1) next.insert(vs);
      }
    }
    level.assign(next.begin(), next.end());
  }
  std::set<std::vector<int>> uniq(level.begin(), level.end());
  out.assign(uniq.begin(), uniq.end());
  return out;
}

// --- Support data -----------------------------------------------------------

// MIN convention throughout: the support value is min over the polytope.
struct SupportData {
  Rat value;
  std::vector<int> face_verts;  // vertex indices where the minimum is attained
  Vec functional;
};

inline SupportData support_data(const Polytope& p, const Vec& l) {
  require(static_cast<int>(l.size()) == p.ambient, "dim_mismatch",
          "support_data: functional dimension mismatch");
  SupportData s;
  s.functional = l;
  for (size_t i = 0; i < p.verts.size(); ++i) {
    Rat v = dot(l, p.verts[i]);
    if (i == 0 || v < s.value) s.value = v;
  }
  for (size_t i = 0; i < p.verts.size(); ++i)
    if (dot(l, p.verts[i]) == s.value) s.face_verts.push_back(static_cast<int>(i));
  return s;
}

inline Rat support_value(const Polytope& p, const Vec& l) {
  Rat best;
  for (size_t i = 0; i < p.verts.size(); ++i) {
    Rat v = dot(l, p.verts[i]);
    if (i == 0 || v < best) best = v;
  }
  return best;
}

// --- Elementary constructions ----------------------------------------------

inline Polytope make_point(const Vec& v) { return convex_hull({v}); }

inline Polytope minkowski_sum(const Polytope& a, const Polytope& b) {
  require(a.ambient == b.ambient, "dim_mismatch", "minkowski_sum: ambient mismatch");
  std::vector<Vec> sums;
  sums.reserve(a.vert_count() * b.vert_count());
  for (const auto& u : a.verts)
    for (const auto& v : b.verts) sums.push_back(vec_add(u, v));
  return convex_hull(sums);
}

inline Polytope translate(const Polytope& p, const Vec& v) {
  std::vector<Vec> pts;
  for (const auto& u : p.verts) pts.push_back(vec_add(u, v));
  return convex_hull(pts);
}

inline Polytope scale_polytope(const Polytope& p, const Rat& c) {
  require(c >= 0, "bad_scale", "scale: negative factor");
  if (c == 0) return make_point(Vec(p.ambient, Rat(0)));
  std::vector<Vec> pts;
  for (const auto& u : p.verts) pts.push_back(vec_scale(u, c));
  return convex_hull(pts);
}

// --- Volumes and centroids ---------------------------------------------------

// Lebesgue volume of a full-dimensional polytope in its ambient space
// (zero when dim < ambient).
inline Rat lebesgue_volume(const Polytope& p) {
  if (p.dim < p.ambient) return Rat(0);
  Rat total = 0;
  int n = p.ambient;
  for (const auto& s : p.triangulation()) {
    Mat m;
    for (size_t i = 1; i < s.size(); ++i)
      m.push_back(vec_sub(p.verts[s[i]], p.verts[s[0]]));
    Rat d = determinant(std::move(m));
    total += d < 0 ? -d : d;
  }
  return total / Rat(factorial(n));
}

namespace detail {

// Map vertices into coordinates of the affine-span lattice: an integer basis
// of (direction span) cap Z^n, so that lattice measures become standard.
inline std::vector<Vec> span_lattice_coords(const Polytope& p) {
  if (p.dim == 0) return {Vec{}};
  std::vector<IntVec> dirs;
  for (size_t i = 1; i < p.verts.size(); ++i)
    dirs.push_back(primitive(vec_sub(p.verts[i], p.verts[0])));
  IntMatrix gen(std::move(dirs));
  IntMatrix basis = saturation_basis(gen);  // rows: lattice basis of span dirs
  check_defect(basis.rows == static_cast<size_t>(p.dim), "span lattice: rank mismatch");
  Mat bt = mat_transpose(basis.to_rat());  // n x d
  std::vector<Vec> out;
  for (const auto& v : p.verts) {
    auto y = solve(bt, vec_sub(v, p.verts[0]));
    check_defect(y.has_value(), "span lattice: point outside span");
    out.push_back(*y);
  }
  return out;
}

inline Rat volume_in_coords(const std::vector<Vec>& coords,
                            const std::vector<std::vector<int>>& tri, int d) {
  Rat total = 0;
  for (const auto& s : tri) {
    Mat m;
    for (size_t i = 1; i < s.size(); ++i)
      m.push_back(vec_sub(coords[s[i]], coords[s[0]]));
    Rat det = determinant(std::move(m));
    total += det < 0 ? -det : det;
  }
  return total / Rat(factorial(d));
}

}  // namespace detail

// Normalized lattice volume: (dim P)! times the Lebesgue volume with respect
// to the lattice of the affine span. A point has volume 1.
inline Rat lattice_volume(const Polytope& p) {
  if (p.dim == 0) return Rat(1);
  auto coords = detail::span_lattice_coords(p);
  return detail::volume_in_coords(coords, p.triangulation(), p.dim) * Rat(factorial(p.dim));
}

// Lebesgue volume with respect to the affine-span lattice (no factorial).
inline Rat span_lattice_lebesgue_volume(const Polytope& p) {
  if (p.dim == 0) return Rat(1);
  return lattice_volume(p) / Rat(factorial(p.dim));
}

// Exact center of mass.
inline Vec centroid(const Polytope& p) {
  if (p.dim == 0) return p.verts[0];
  // Weights from span coordinates (any fixed basis gives the right ratios).
  auto coords = detail::span_lattice_coords(p);
  Rat total = 0;
  Vec acc(p.ambient, Rat(0));
  for (const auto& s : p.triangulation()) {
    Mat m;
    for (size_t i = 1; i < s.size(); ++i)
      m.push_back(vec_sub(coords[s[i]], coords[s[0]]));
    Rat w = determinant(std::move(m));
    if (w < 0) w = -w;
    if (w == 0) continue;
    Vec c(p.ambient, Rat(0));
    for (int vi : s) c = vec_add(c, p.verts[vi]);
    c = vec_scale(c, Rat(1) / Rat(static_cast<int>(s.size())));
    acc = vec_add(acc, vec_scale(c, w));
    total += w;
  }
  check_defect(total > 0, "centroid: degenerate triangulation");
  return vec_scale(acc, Rat(1) / total);
}

// --- H-to-V conversions -------------------------------------------------------

namespace detail {

// Vertices of { x : ineq·(1,x) >= 0, eq·(1,x) = 0 }, which must be bounded.
inline std::vector<Vec> h_to_v(int ambient, const Mat& homog_ineqs, const Mat& homog_eqs) {
  Mat ineqs = homog_ineqs;
  Vec positivity(ambient + 1, Rat(0));
  positivity[0] = 1;
  ineqs.push_back(positivity);
  auto rays = cone_extreme_rays(ineqs, homog_eqs);
  std::vector<Vec> pts;
  for (const auto& r : rays) {
    if (r[0] == 0) {
      bool zero = std::all_of(r.begin(), r.end(), [](const Int& x) { return x == 0; });
      check_defect(zero, "h_to_v: unbounded region");
      continue;
    }
    check_defect(r[0] > 0, "h_to_v: ray below the x0=0 plane");
    Vec x(ambient);
    for (int i = 0; i < ambient; ++i) x[i] = Rat(r[i + 1]) / Rat(r[0]);
    pts.push_back(std::move(x));
  }
  return pts;
}

inline Mat polytope_homog_ineqs(const Polytope& p) {
  Mat rows;
  for (const auto& f : p.facets) {
    Vec r(p.ambient + 1);
    r[0] = -f.offset;
    for (int i = 0; i < p.ambient; ++i) r[i + 1] = Rat(f.normal[i]);
    rows.push_back(std::move(r));
  }
  return rows;
}

inline Mat polytope_homog_eqs(const Polytope& p) {
  Mat rows;
  for (size_t i = 0; i < p.span_eq_normals.size(); ++i) {
    Vec r(p.ambient + 1);
    r[0] = -p.span_eq_offsets[i];
    for (int j = 0; j < p.ambient; ++j) r[j + 1] = p.span_eq_normals[i][j];
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace detail

// Intersection with a halfspace {x : l·x <= c} (or >= with flip).
// Returns nullopt when the intersection is empty.
inline std::optional<Polytope> truncate_below(const Polytope& p, const Vec& l, const Rat& c) {
  if (p.dim == 0) {
    if (dot(l, p.verts[0]) <= c) return p;
    return std::nullopt;
  }
  Mat ineqs = detail::polytope_homog_ineqs(p);
  Vec row(p.ambient + 1);
  row[0] = c;
  for (int i = 0; i < p.ambient; ++i) row[i + 1] = -l[i];
  ineqs.push_back(std::move(row));
  auto pts = detail::h_to_v(p.ambient, ineqs, detail::polytope_homog_eqs(p));
  if (pts.empty()) return std::nullopt;
  return convex_hull(pts);
}

// Intersection with the affine subspace fixing the given coordinates.
inline std::optional<Polytope> slice_at(const Polytope& p, const std::vector<int>& coords,
                                        const Vec& values) {
  Mat eqs = detail::polytope_homog_eqs(p);
  for (size_t i = 0; i < coords.size(); ++i) {
    Vec r(p.ambient + 1, Rat(0));
    r[0] = -values[i];
    r[coords[i] + 1] = 1;
    eqs.push_back(std::move(r));
  }
  if (p.dim == 0) {
    for (size_t i = 0; i < coords.size(); ++i)
      if (p.verts[0][coords[i]] != values[i]) return std::nullopt;
    return p;
  }
  auto pts = detail::h_to_v(p.ambient, detail::polytope_homog_ineqs(p), eqs);
  if (pts.empty()) return std::nullopt;
  return convex_hull(pts);
}

// Coordinate projection (keep the listed coordinates, in order).
inline Polytope project_coords(const Polytope& p, const std::vector<int>& keep) {
  std::vector<Vec> pts;
  for (const auto& v : p.verts) {
    Vec w(keep.size());
    for (size_t i = 0; i < keep.size(); ++i) w[i] = v[keep[i]];
    pts.push_back(std::move(w));
  }
  return convex_hull(pts);
}

// Image under a linear map given by rows.
inline Polytope linear_image(const Polytope& p, const Mat& rows) {
  std::vector<Vec> pts;
  for (const auto& v : p.verts) pts.push_back(mat_apply(rows, v));
  return convex_hull(pts);
}

}  // namespace polydisc
