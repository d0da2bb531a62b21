#pragma once

// Virtual polytopes: formal Minkowski combinations encoded by their
// piecewise-linear support functions. Realization decides whether the
// support function is concave (a genuine min-support function) and if so
// reconstructs the polytope; otherwise it reports a witness ray pair.
//
// The common refinement of the term fans is never materialized as a fan:
// its maximal cones are exactly the vertex normal cones of the Minkowski
// sum of all terms, which one hull computation provides.

#include "polydisc/polytope.hpp"

#include <variant>

namespace polydisc {

struct VirtualPolytope {
  int ambient = 0;
  std::vector<std::pair<Rat, Polytope>> terms;

  VirtualPolytope() = default;
  explicit VirtualPolytope(int amb) : ambient(amb) {}
  explicit VirtualPolytope(const Polytope& p) : ambient(p.ambient) {
    terms.emplace_back(Rat(1), p);
  }

  void add(const Rat& coeff, const Polytope& p) {
    check_defect(p.ambient == ambient, "virtual: ambient mismatch");
    if (coeff != 0) terms.emplace_back(coeff, p);
  }

  Rat support(const Vec& gamma) const {
    Rat s = 0;
    for (const auto& [c, p] : terms) s += c * support_value(p, gamma);
    return s;
  }

  VirtualPolytope operator+(const VirtualPolytope& o) const {
    VirtualPolytope r = *this;
    for (const auto& [c, p] : o.terms) r.add(c, p);
    return r;
  }
  VirtualPolytope operator-(const VirtualPolytope& o) const {
    VirtualPolytope r = *this;
    for (const auto& [c, p] : o.terms) r.add(-c, p);
    return r;
  }
};

// Support function scaled by a nonnegative rational.
inline VirtualPolytope scale(const VirtualPolytope& v, const Rat& c) {
  require(c >= 0, "bad_scale", "scale: negative factor");
  VirtualPolytope r(v.ambient);
  if (c == 0) {
    r.add(Rat(1), make_point(Vec(v.ambient, Rat(0))));
    return r;
  }
  for (const auto& [coeff, p] : v.terms) r.add(coeff, scale_polytope(p, c));
  return r;
}

struct NotRealizable {
  Vec gamma1, gamma2;  // interior functionals of adjacent refinement cones
  Vec v1, v2;          // the conflicting linear-piece gradients
};

using RealizeResult = std::variant<Polytope, NotRealizable>;

namespace detail {

// Minkowski sum of all terms (coefficients ignored); its normal fan is the
// common refinement of the term fans.
inline Polytope refinement_carrier(const VirtualPolytope& v) {
  Polytope s = make_point(Vec(v.ambient, Rat(0)));
  for (const auto& [c, p] : v.terms) s = minkowski_sum(s, p);
  return s;
}

// Interior functional of the normal cone of vertex vi: the sum of the inner
// normals of the facets through it, which is strict on every other vertex.
inline Vec vertex_cone_interior(const Polytope& s, size_t vi) {
  Vec gamma(s.ambient, Rat(0));
  for (const auto& f : s.facets)
    if (std::binary_search(f.verts.begin(), f.verts.end(), static_cast<int>(vi)))
      for (int i = 0; i < s.ambient; ++i) gamma[i] += Rat(f.normal[i]);
  return gamma;
}

}  // namespace detail

inline RealizeResult realize(const VirtualPolytope& v) {
  if (v.terms.empty()) return make_point(Vec(v.ambient, Rat(0)));
  Polytope s = detail::refinement_carrier(v);

  if (s.dim == 0) {
    Vec pt(v.ambient, Rat(0));
    for (const auto& [c, p] : v.terms) pt = vec_add(pt, vec_scale(p.verts[0], c));
    return make_point(pt);
  }

  size_t nv = s.vert_count();
  std::vector<Vec> gammas(nv), cands(nv);
  for (size_t w = 0; w < nv; ++w) {
    Vec gamma = detail::vertex_cone_interior(s, w);
    Vec cand(v.ambient, Rat(0));
    for (const auto& [c, p] : v.terms) {
      auto sd = support_data(p, gamma);
      check_defect(sd.face_verts.size() == 1,
                   "realize: refinement functional picks a non-vertex face");
      cand = vec_add(cand, vec_scale(p.verts[sd.face_verts[0]], c));
    }
    gammas[w] = std::move(gamma);
    cands[w] = std::move(cand);
  }

  // Concavity across every wall of the refinement, i.e. every edge of s.
  for (const auto& e : s.edges()) {
    Rat t = dot(gammas[e[0]], vec_sub(cands[e[1]], cands[e[0]]));
    if (t < 0)
      return NotRealizable{gammas[e[0]], gammas[e[1]], cands[e[0]], cands[e[1]]};
    Rat t2 = dot(gammas[e[1]], vec_sub(cands[e[0]], cands[e[1]]));
    if (t2 < 0)
      return NotRealizable{gammas[e[1]], gammas[e[0]], cands[e[1]], cands[e[0]]};
  }

  Polytope out = convex_hull(cands);
  // The realized support must reproduce the virtual one on every refinement
  // cone; with concavity established this is a theorem, so treat any
  // discrepancy as a defect.
  for (size_t w = 0; w < nv; ++w)
    check_defect(support_value(out, gammas[w]) == dot(gammas[w], cands[w]),
                 "realize: support mismatch after concavity check");
  return out;
}

inline Polytope realize_or_throw(const VirtualPolytope& v, const std::string& what) {
  auto r = realize(v);
  if (std::holds_alternative<Polytope>(r)) return std::get<Polytope>(r);
  const auto& w = std::get<NotRealizable>(r);
  std::ostringstream os;
  os << what << ": virtual combination is not realizable; witness rays (";
  for (const auto& x : w.gamma1) os << x << " ";
  os << ") / (";
  for (const auto& x : w.gamma2) os << x << " ";
  os << ")";
  throw MathError("not_realizable", os.str());
}

// Equality of support functions, decided on the rays of the common
// refinement of all term fans: the facet normals of the summed carrier
// (plus, for lower-dimensional carriers, both signs of the complement
// directions) generate every maximal refinement cone.
inline bool virtual_equal(const VirtualPolytope& a, const VirtualPolytope& b) {
  check_defect(a.ambient == b.ambient, "virtual_equal: ambient mismatch");
  VirtualPolytope joint(a.ambient);
  for (const auto& [c, p] : a.terms) joint.add(Rat(1), p);
  for (const auto& [c, p] : b.terms) joint.add(Rat(1), p);
  if (joint.terms.empty()) return true;
  Polytope s = detail::refinement_carrier(joint);
  std::vector<Vec> test_rays;
  for (const auto& f : s.facets) test_rays.push_back(to_rat(f.normal));
  for (const auto& eq : s.span_eq_normals) {
    test_rays.push_back(eq);
    test_rays.push_back(vec_scale(eq, Rat(-1)));
  }
  if (test_rays.empty()) {
    // Point carrier: compare the single support values directly.
    Vec probe(a.ambient, Rat(0));
    if (a.support(probe) != b.support(probe)) return false;
    for (int i = 0; i < a.ambient; ++i) {
      Vec e(a.ambient, Rat(0));
      e[i] = 1;
      if (a.support(e) != b.support(e)) return false;
      e[i] = -1;
      if (a.support(e) != b.support(e)) return false;
    }
    return true;
  }
  for (const auto& r : test_rays)
    if (a.support(r) != b.support(r)) return false;
  return true;
}

}  // namespace polydisc
