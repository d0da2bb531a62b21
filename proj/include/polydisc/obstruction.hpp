#pragma once

// Point configurations and their face posets, the lattice volumes c^{A',A},
// the Euler obstruction table e^{A',A} = (C^{-1})_{A',A}, the discriminant
// degree formula, and the dual-defect tests (degree, two parallel
// hyperplanes, iterated circuits).

#include "polydisc/polytope.hpp"

#include <optional>

namespace polydisc {

struct ConfigFace {
  std::vector<int> point_indices;  // sorted indices into the configuration
  int dim = -1;
};

class PointConfiguration {
 public:
  int dim = 0;  // ambient k
  std::vector<IntVec> points;  // sorted lex, distinct
  Polytope hull;

  PointConfiguration() = default;

  static PointConfiguration from_points(int k, std::vector<IntVec> pts) {
    require(!pts.empty(), "empty_input", "configuration: no points");
    for (const auto& p : pts)
      require(static_cast<int>(p.size()) == k, "dim_mismatch",
              "configuration: point dimension mismatch");
    std::sort(pts.begin(), pts.end());
    for (size_t i = 1; i < pts.size(); ++i)
      require(pts[i] != pts[i - 1], "duplicate_points", "configuration: duplicate point");
    PointConfiguration c;
    c.dim = k;
    c.points = std::move(pts);
    std::vector<Vec> rat;
    for (const auto& p : c.points) rat.push_back(to_rat(p));
    c.hull = convex_hull(rat);
    return c;
  }

  size_t size() const { return points.size(); }
  int hull_dim() const { return hull.dim; }

  Vec point_rat(int i) const { return to_rat(points[i]); }

  // Complete face poset: intersections of the configuration with the faces
  // of its hull, ordered by (dim, lex index list). Includes the whole set.
  const std::vector<ConfigFace>& faces() const {
    std::call_once(cache_->once, [this] { build_faces(); });
    return cache_->faces;
  }

  int face_index(const std::vector<int>& point_indices) const {
    const auto& fs = faces();
    for (size_t i = 0; i < fs.size(); ++i)
      if (fs[i].point_indices == point_indices) return static_cast<int>(i);
    return -1;
  }

  std::vector<IntVec> face_points(const ConfigFace& f) const {
    std::vector<IntVec> out;
    for (int i : f.point_indices) out.push_back(points[i]);
    return out;
  }

 private:
  struct Cache {
    std::once_flag once;
    std::vector<ConfigFace> faces;
  };
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();

  void build_faces() const {
    auto& out = cache_->faces;
    std::set<std::vector<int>> seen;
    for (const auto& hf : hull.faces()) {
      // Points lying on this hull face: tight on every facet containing it.
      std::vector<size_t> tight_facets;
      for (size_t fi = 0; fi < hull.facets.size(); ++fi) {
        bool contains_face = std::includes(hull.facets[fi].verts.begin(),
                                           hull.facets[fi].verts.end(),
                                           hf.verts.begin(), hf.verts.end());
        if (contains_face) tight_facets.push_back(fi);
      }
      std::vector<int> members;
      for (size_t pi = 0; pi < points.size(); ++pi) {
        Vec p = to_rat(points[pi]);
        bool on_face = true;
        for (size_t fi : tight_facets) {
          const auto& f = hull.facets[fi];
          Rat s = 0;
          for (int c = 0; c < dim; ++c) s += Rat(f.normal[c]) * p[c];
          if (s != f.offset) { on_face = false; break; }
        }
        // A face of the hull is the intersection of the facets through it;
        // for the whole polytope the list is empty and every point passes.
        if (on_face) members.push_back(static_cast<int>(pi));
      }
      // Guard: hull faces of lower dimension than the span intersected with
      // nothing extra are exactly the closure of the hull face.
      if (members.empty()) continue;
      if (!seen.insert(members).second) continue;
      std::vector<Vec> pts;
      for (int i : members) pts.push_back(to_rat(points[i]));
      out.push_back(ConfigFace{members, detail::affine_dim(pts)});
    }
    std::sort(out.begin(), out.end(), [](const ConfigFace& a, const ConfigFace& b) {
      if (a.dim != b.dim) return a.dim < b.dim;
      return a.point_indices < b.point_indices;
    });
  }
};

namespace detail {

// Points of the configuration mapped into lattice coordinates of its own
// affine span (translate by the first point, then a saturated basis).
inline std::pair<std::vector<Vec>, IntMatrix> span_lattice_points(
    const std::vector<IntVec>& pts) {
  size_t k = pts[0].size();
  std::vector<IntVec> difs;
  for (size_t i = 1; i < pts.size(); ++i) {
    IntVec d(k);
    for (size_t j = 0; j < k; ++j) d[j] = pts[i][j] - pts[0][j];
    difs.push_back(std::move(d));
  }
  IntMatrix sat = difs.empty() ? IntMatrix(0, k) : saturation_basis(IntMatrix(difs));
  size_t d = sat.rows;
  Mat bt = mat_transpose(sat.to_rat());  // k x d
  std::vector<Vec> out;
  for (const auto& p : pts) {
    Vec x(k);
    for (size_t j = 0; j < k; ++j) x[j] = Rat(p[j] - pts[0][j]);
    if (d == 0) {
      out.push_back(Vec{});
      continue;
    }
    auto y = solve(bt, x);
    check_defect(y.has_value(), "span_lattice_points: point outside span");
    out.push_back(*y);
  }
  return {out, sat};
}

}  // namespace detail

// The Milnor number c^{A',A}: the eta-volume of conv(s(A)) minus
// conv(s(A \ A')) in the quotient by the direction span of A', where eta is
// (dim M/M')! times lattice Lebesgue. Returns 0 when A' is not a face and 1
// on the diagonal.
inline Int milnor_number_c(const PointConfiguration& a, const std::vector<int>& face_pts) {
  if (static_cast<size_t>(face_pts.size()) == a.size()) return 1;
  if (a.face_index(face_pts) < 0) return 0;

  auto [span_pts, sat] = detail::span_lattice_points(a.points);
  size_t d_m = sat.rows;  // dim of A's span

  // Direction generators of A' in span coordinates (integer there).
  std::vector<IntVec> kern;
  for (size_t i = 1; i < face_pts.size(); ++i) {
    Vec dif = vec_sub(span_pts[face_pts[i]], span_pts[face_pts[0]]);
    kern.push_back(primitive(dif));
  }
  QuotientChart chart =
      quotient_chart(kern.empty() ? IntMatrix(0, d_m) : IntMatrix(kern), d_m, Rat(1));
  size_t q = chart.quotient_dim();
  Rat norm = Rat(factorial(static_cast<int>(q)));

  std::vector<int> face_sorted = face_pts;
  std::sort(face_sorted.begin(), face_sorted.end());
  std::vector<Vec> all_img, rest_img;
  for (size_t i = 0; i < a.size(); ++i) {
    Vec img = chart.apply(span_pts[i]);
    all_img.push_back(img);
    if (!std::binary_search(face_sorted.begin(), face_sorted.end(), static_cast<int>(i)))
      rest_img.push_back(img);
  }
  check_defect(!rest_img.empty(), "milnor_number_c: proper face removed everything");
  Rat vol_all = lebesgue_volume(convex_hull(all_img));
  Rat vol_rest = lebesgue_volume(convex_hull(rest_img));
  Rat c = norm * (vol_all - vol_rest);
  check_defect(rat_den(c) == 1, "milnor_number_c: non-integer volume");
  return rat_num(c);
}

struct ObstructionTable {
  std::vector<ConfigFace> faces;     // dimension-ordered
  std::vector<std::vector<Int>> c;   // c[row=A''][col=A']
  std::vector<std::vector<Int>> e;   // inverse of c

  Int euler_obstruction(int face_row, int face_col) const { return e[face_row][face_col]; }
};

inline ObstructionTable obstruction_table(const PointConfiguration& a) {
  ObstructionTable t;
  t.faces = a.faces();
  size_t n = t.faces.size();
  t.c.assign(n, std::vector<Int>(n, Int(0)));
  for (size_t col = 0; col < n; ++col) {
    PointConfiguration sub = PointConfiguration::from_points(
        a.dim, a.face_points(t.faces[col]));
    for (size_t row = 0; row < n; ++row) {
      // c^{A'', A'}: translate the row face into the column configuration.
      std::vector<int> in_sub;
      bool subset = true;
      for (int pi : t.faces[row].point_indices) {
        auto it = std::lower_bound(sub.points.begin(), sub.points.end(), a.points[pi]);
        if (it == sub.points.end() || *it != a.points[pi]) { subset = false; break; }
        in_sub.push_back(static_cast<int>(it - sub.points.begin()));
      }
      if (!subset) continue;
      std::sort(in_sub.begin(), in_sub.end());
      t.c[row][col] = milnor_number_c(sub, in_sub);
    }
  }
  // Invariants: unit upper triangular in the dimension order.
  for (size_t i = 0; i < n; ++i) {
    check_defect(t.c[i][i] == 1, "obstruction_table: diagonal not 1");
    for (size_t j = 0; j < i; ++j)
      check_defect(t.c[i][j] == 0, "obstruction_table: not upper triangular");
  }
  Mat cr(n, Vec(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) cr[i][j] = Rat(t.c[i][j]);
  auto inv = mat_inverse(cr);
  check_defect(inv.has_value(), "obstruction_table: C not invertible");
  t.e.assign(n, std::vector<Int>(n, Int(0)));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      check_defect(rat_den((*inv)[i][j]) == 1, "obstruction_table: E not integer");
      t.e[i][j] = rat_num((*inv)[i][j]);
    }
  // C * E = identity, exactly.
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      Int acc = 0;
      for (size_t l = 0; l < n; ++l) acc += t.c[i][l] * t.e[l][j];
      check_defect(acc == (i == j ? 1 : 0), "obstruction_table: C*E != I");
    }
  return t;
}

// deg A = sum over faces A' of e^{A',A} (dim A' + 1) Vol(A'), with Vol the
// lattice-normalized volume of conv A'.
inline Int degree_A(const PointConfiguration& a) {
  auto t = obstruction_table(a);
  size_t n = t.faces.size();
  size_t full = n - 1;  // the whole configuration sorts last
  Rat acc = 0;
  for (size_t i = 0; i < n; ++i) {
    std::vector<Vec> pts;
    for (int pi : t.faces[i].point_indices) pts.push_back(a.point_rat(pi));
    Rat vol = lattice_volume(convex_hull(pts));
    acc += Rat(t.e[i][full]) * Rat(t.faces[i].dim + 1) * vol;
  }
  check_defect(rat_den(acc) == 1, "degree_A: non-integer degree");
  return rat_num(acc);
}

// --- Dual-defect tests ---------------------------------------------------------

namespace detail {

// Is the set contained in a union of two parallel hyperplanes? Equivalently:
// some nonzero functional takes at most two values on the points.
inline bool two_parallel_hyperplanes(const std::vector<IntVec>& pts, int k) {
  if (pts.size() <= 2) return true;
  size_t n = pts.size();
  // Partition with point 0 in the first part; either part within one plane.
  for (size_t mask = 0; mask < (size_t(1) << (n - 1)); ++mask) {
    Mat rows;
    std::vector<size_t> part1{0}, part2;
    for (size_t i = 1; i < n; ++i)
      ((mask >> (i - 1)) & 1 ? part1 : part2).push_back(i);
    auto add_difs = [&](const std::vector<size_t>& part) {
      for (size_t i = 1; i < part.size(); ++i) {
        Vec d(k);
        for (int j = 0; j < k; ++j) d[j] = Rat(pts[part[i]][j] - pts[part[0]][j]);
        rows.push_back(std::move(d));
      }
    };
    add_difs(part1);
    add_difs(part2);
    if (rows.empty() || mat_rank(rows) < static_cast<size_t>(k)) return true;
  }
  return false;
}

struct CircuitSearch {
  const std::vector<IntVec>& pts;
  int k;
  std::map<std::string, bool> failed;  // memo: (L basis, available) -> no tower

  explicit CircuitSearch(const std::vector<IntVec>& p, int kk) : pts(p), k(kk) {}

  static std::string key(const IntMatrix& l_basis, const std::vector<int>& avail) {
    std::string s;
    for (const auto& row : l_basis.entries)
      for (const auto& x : row) { s += x.str(); s += ','; }
    s += '|';
    for (int a : avail) { s += std::to_string(a); s += ','; }
    return s;
  }

  // Does {0} + C (directions rel. base) project injectively onto a circuit
  // in (L + span C)/L?
  bool is_circuit_step(const IntMatrix& l_basis, const std::vector<Vec>& difs) const {
    size_t l_dim = l_basis.rows;
    Mat joint = l_basis.to_rat();
    for (const auto& d : difs) joint.push_back(d);
    size_t new_dim = mat_rank(joint);
    size_t dprime = new_dim - l_dim;
    if (dprime < 1) return false;
    if (difs.size() != dprime + 1) return false;
    // Images in the quotient by L: use a chart killing L.
    std::vector<IntVec> kern;
    for (size_t i = 0; i < l_basis.rows; ++i) kern.push_back(l_basis.entries[i]);
    QuotientChart chart =
        quotient_chart(kern.empty() ? IntMatrix(0, k) : IntMatrix(kern), k, Rat(1));
    std::vector<Vec> imgs{Vec(chart.quotient_dim(), Rat(0))};  // image of 0
    for (const auto& d : difs) imgs.push_back(chart.apply(d));
    // Injectivity.
    for (size_t i = 0; i < imgs.size(); ++i)
      for (size_t j = i + 1; j < imgs.size(); ++j)
        if (imgs[i] == imgs[j]) return false;
    // Circuit: every subset omitting one element affinely spans d'.
    for (size_t omit = 0; omit < imgs.size(); ++omit) {
      Mat rows;
      size_t first = omit == 0 ? 1 : 0;
      for (size_t i = 0; i < imgs.size(); ++i) {
        if (i == omit || i == first) continue;
        rows.push_back(vec_sub(imgs[i], imgs[first]));
      }
      if (mat_rank(rows) != dprime) return false;
    }
    return true;
  }

  // Extend the tower from subspace L using available difference indices.
  // On success fills `used` with the chosen indices.
  bool extend(const IntMatrix& l_basis, std::vector<int> avail,
              const std::vector<Vec>& all_difs, std::vector<int>& used) {
    size_t l_dim = l_basis.rows;
    if (static_cast<int>(l_dim) == k) return true;
    auto memo_key = key(l_basis, avail);
    auto it = failed.find(memo_key);
    if (it != failed.end()) return false;

    size_t max_pick = std::min<size_t>(avail.size(), k - l_dim + 1);
    std::vector<int> pick;
    std::function<bool(size_t, size_t)> choose = [&](size_t start, size_t want) {
      if (want == 0) {
        std::vector<Vec> difs;
        for (int i : pick) difs.push_back(all_difs[i]);
        if (!is_circuit_step(l_basis, difs)) return false;
        Mat joint = l_basis.to_rat();
        for (const auto& d : difs) joint.push_back(d);
        std::vector<IntVec> prim;
        for (const auto& r : joint) prim.push_back(primitive(r));
        IntMatrix new_l = saturation_basis(IntMatrix(prim));
        std::vector<int> rest;
        for (int a : avail)
          if (std::find(pick.begin(), pick.end(), a) == pick.end()) rest.push_back(a);
        if (extend(new_l, rest, all_difs, used)) {
          used.insert(used.end(), pick.begin(), pick.end());
          return true;
        }
        return false;
      }
      for (size_t i = start; i + want <= avail.size() + 1 && i < avail.size(); ++i) {
        pick.push_back(avail[i]);
        if (choose(i + 1, want - 1)) return true;
        pick.pop_back();
      }
      return false;
    };
    for (size_t sz = 2; sz <= max_pick; ++sz)
      if (choose(0, sz)) return true;
    failed[memo_key] = true;
    return false;
  }
};

// Search for an iterated circuit inside the configuration, spanning R^k.
// Returns the witness point indices (including the base point) or nothing.
inline std::optional<std::vector<int>> find_iterated_circuit(
    const std::vector<IntVec>& pts, int k) {
  if (k == 0) return std::nullopt;
  for (size_t b = 0; b < pts.size(); ++b) {
    std::vector<Vec> difs;
    std::vector<int> dif_owner;
    for (size_t i = 0; i < pts.size(); ++i) {
      if (i == b) continue;
      Vec d(k);
      for (int j = 0; j < k; ++j) d[j] = Rat(pts[i][j] - pts[b][j]);
      difs.push_back(std::move(d));
      dif_owner.push_back(static_cast<int>(i));
    }
    CircuitSearch search(pts, k);
    std::vector<int> avail(difs.size());
    for (size_t i = 0; i < difs.size(); ++i) avail[i] = static_cast<int>(i);
    std::vector<int> used;
    if (search.extend(IntMatrix(0, k), avail, difs, used)) {
      std::vector<int> witness{static_cast<int>(b)};
      for (int u : used) witness.push_back(dif_owner[u]);
      std::sort(witness.begin(), witness.end());
      return witness;
    }
  }
  return std::nullopt;
}

}  // namespace detail

struct DualDefectReport {
  Int degree = 0;
  bool degree_zero = false;  // authoritative dual-defect verdict
  bool two_hyperplane_containment = false;
  std::optional<std::vector<int>> iterated_circuit;  // witness point indices
};

inline DualDefectReport dual_defect_report(const PointConfiguration& a) {
  DualDefectReport r;
  r.degree = degree_A(a);
  r.degree_zero = (r.degree == 0);
  r.two_hyperplane_containment = detail::two_parallel_hyperplanes(a.points, a.dim);
  r.iterated_circuit = detail::find_iterated_circuit(a.points, a.dim);
  return r;
}

}  // namespace polydisc
