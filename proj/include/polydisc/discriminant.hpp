#pragma once

// Newton polytopes of discriminants of projections: the hypersurface
// face-sum formula, complete intersections through the Cayley lift, the
// fast path for analogous configurations, higher mixed fiber polytopes,
// resultant multiplicities, bifurcation sets, leading exponents, and the
// worked critical-point counts for 3-polytopes.

#include "polydisc/fiber.hpp"
#include "polydisc/lp.hpp"
#include "polydisc/obstruction.hpp"

namespace polydisc {

// A point configuration together with a coefficient Newton polytope per
// point; assembles into the split polytope conv of Delta_a x {a}.
struct CoefficientSpec {
  PointConfiguration config;   // A in Z^k
  std::vector<Polytope> coeff; // parallel to config.points, each in R^n
  int n = 0;

  int k() const { return config.dim; }

  SplitPolytope assembled() const {
    std::vector<Vec> pts;
    for (size_t i = 0; i < config.size(); ++i)
      for (const auto& v : coeff[i].verts) {
        Vec w(n + k());
        std::copy(v.begin(), v.end(), w.begin());
        for (int j = 0; j < k(); ++j) w[n + j] = Rat(config.points[i][j]);
        pts.push_back(std::move(w));
      }
    return make_split(n, k(), pts);
  }

  // The face of the assembled polytope over a configuration face.
  SplitPolytope face_preimage(const std::vector<int>& face_pts) const {
    require(config.face_index(face_pts) >= 0, "not_a_face",
            "face_preimage: not a face of the configuration");
    std::vector<Vec> pts;
    for (int i : face_pts)
      for (const auto& v : coeff[i].verts) {
        Vec w(n + k());
        std::copy(v.begin(), v.end(), w.begin());
        for (int j = 0; j < k(); ++j) w[n + j] = Rat(config.points[i][j]);
        pts.push_back(std::move(w));
      }
    return make_split(n, k(), pts);
  }

  CoefficientSpec restricted_to(const std::vector<int>& face_pts) const {
    CoefficientSpec s;
    s.n = n;
    std::vector<IntVec> pts;
    for (int i : face_pts) pts.push_back(config.points[i]);
    s.config = PointConfiguration::from_points(config.dim, pts);
    s.coeff.resize(s.config.size());
    for (int i : face_pts) {
      auto it = std::lower_bound(s.config.points.begin(), s.config.points.end(),
                                 config.points[i]);
      s.coeff[it - s.config.points.begin()] = coeff[i];
    }
    return s;
  }
};

// The universal spec: each coefficient polytope is the matching standard
// basis point of R^|A|, in sorted point order.
inline CoefficientSpec universal_spec(const PointConfiguration& config) {
  CoefficientSpec s;
  s.config = config;
  s.n = static_cast<int>(config.size());
  for (size_t i = 0; i < config.size(); ++i) {
    Vec e(s.n, Rat(0));
    e[i] = 1;
    s.coeff.push_back(make_point(e));
  }
  return s;
}

// The exponent d(A) = |J| of Definitions of non-reduced discriminants: the
// index of the lattice generated by A x {1}.
inline Int discriminant_multiplicity(const PointConfiguration& config) {
  size_t s = config.size();
  IntMatrix lifted(s, config.dim + 1);
  for (size_t i = 0; i < s; ++i) {
    for (int j = 0; j < config.dim; ++j) lifted.at(i, j) = config.points[i][j];
    lifted.at(i, config.dim) = 1;
  }
  return lattice_index(lifted, config.dim + 1);
}

struct HypersurfaceNewton {
  Polytope newton;
  bool no_codim1 = false;  // the polytope is a single point
};

// Theorem-level hypersurface formula: N = sum over faces A' of
// e^{A',A} * Int Delta(A'), realized from the virtual combination.
inline HypersurfaceNewton newton_discriminant_hypersurface(const CoefficientSpec& spec) {
  auto table = obstruction_table(spec.config);
  size_t nf = table.faces.size();
  size_t full = nf - 1;
  VirtualPolytope virt(spec.n);
  for (size_t i = 0; i < nf; ++i) {
    Int e = table.e[i][full];
    if (e == 0) continue;
    Polytope integral = fiber_polytope(spec.face_preimage(table.faces[i].point_indices));
    virt.add(Rat(e), integral);
  }
  HypersurfaceNewton out;
  auto res = realize(virt);
  if (!std::holds_alternative<Polytope>(res)) {
    const auto& w = std::get<NotRealizable>(res);
    std::ostringstream os;
    os << "newton_discriminant_hypersurface: face-sum combination not realizable;"
       << " witness rays (";
    for (const auto& x : w.gamma1) os << x << " ";
    os << ") / (";
    for (const auto& x : w.gamma2) os << x << " ";
    os << ")";
    throw InternalDefect(os.str());
  }
  out.newton = std::get<Polytope>(res);
  out.no_codim1 = out.newton.is_point();
  return out;
}

// --- Cayley machinery ----------------------------------------------------------

struct AdmissibleSubset {
  std::vector<int> indices;  // J, sorted
  int codim = 0;
};

namespace detail {

inline int sum_dim(const std::vector<const PointConfiguration*>& parts,
                   const std::vector<int>& subset) {
  Mat dirs;
  for (int j : subset) {
    const auto& pts = parts[j]->points;
    for (size_t i = 1; i < pts.size(); ++i) {
      Vec d(parts[j]->dim);
      for (int c = 0; c < parts[j]->dim; ++c) d[c] = Rat(pts[i][c] - pts[0][c]);
      dirs.push_back(std::move(d));
    }
  }
  return static_cast<int>(mat_rank(std::move(dirs)));
}

}  // namespace detail

// Subsets J with codim J <= codim J' for every superset J', where
// codim J = dim(sum_{j in J} A_j) - |J|.
inline std::vector<AdmissibleSubset> admissible_subsets(
    const std::vector<PointConfiguration>& parts) {
  size_t l1 = parts.size();
  std::vector<const PointConfiguration*> ptrs;
  for (const auto& p : parts) ptrs.push_back(&p);
  std::vector<int> codim(size_t(1) << l1, 0);
  std::vector<std::vector<int>> sets(size_t(1) << l1);
  for (size_t mask = 1; mask < (size_t(1) << l1); ++mask) {
    std::vector<int> j;
    for (size_t i = 0; i < l1; ++i)
      if (mask & (size_t(1) << i)) j.push_back(static_cast<int>(i));
    codim[mask] = detail::sum_dim(ptrs, j) - static_cast<int>(j.size());
    sets[mask] = std::move(j);
  }
  std::vector<AdmissibleSubset> out;
  for (size_t mask = 1; mask < (size_t(1) << l1); ++mask) {
    bool ok = true;
    for (size_t sup = mask; sup < (size_t(1) << l1) && ok; sup = (sup + 1) | mask)
      if (sup != mask && codim[mask] > codim[sup]) ok = false;
    if (ok) out.push_back({sets[mask], codim[mask]});
  }
  std::sort(out.begin(), out.end(), [](const AdmissibleSubset& a, const AdmissibleSubset& b) {
    return a.indices < b.indices;
  });
  return out;
}

// The Cayley lift of the selected specs: points (a; e_j) in Z^(k+|J|) with
// coefficient polytopes carried over verbatim.
inline CoefficientSpec cayley_spec(const std::vector<CoefficientSpec>& specs,
                                   const std::vector<int>& subset) {
  require(!subset.empty(), "empty_input", "cayley_spec: empty subset");
  int k = specs[0].k(), n = specs[0].n;
  int kk = k + static_cast<int>(subset.size());
  std::vector<IntVec> pts;
  std::vector<Polytope> coeffs;
  for (size_t idx = 0; idx < subset.size(); ++idx) {
    const auto& s = specs[subset[idx]];
    require(s.k() == k && s.n == n, "dim_mismatch", "cayley_spec: spec mismatch");
    for (size_t i = 0; i < s.config.size(); ++i) {
      IntVec p(kk, Int(0));
      for (int c = 0; c < k; ++c) p[c] = s.config.points[i][c];
      p[k + static_cast<int>(idx)] = 1;
      pts.push_back(std::move(p));
      coeffs.push_back(s.coeff[i]);
    }
  }
  CoefficientSpec out;
  out.n = n;
  out.config = PointConfiguration::from_points(kk, pts);
  out.coeff.resize(out.config.size());
  for (size_t i = 0; i < pts.size(); ++i) {
    auto it = std::lower_bound(out.config.points.begin(), out.config.points.end(), pts[i]);
    out.coeff[it - out.config.points.begin()] = coeffs[i];
  }
  return out;
}

struct CIFactor {
  std::vector<int> subset;  // J
  Polytope newton;          // the (possibly reduced) factor polytope
  Int multiplicity = 1;     // the non-reduced exponent of this factor
};

struct CIDiscriminant {
  Polytope newton;
  std::vector<CIFactor> factors;
};

// Product over admissible J of the Cayley hypersurface discriminants.
// reduced = true divides every factor polytope by its multiplicity index
// (the square-free convention); false keeps the non-reduced powers.
inline CIDiscriminant newton_ci_discriminant(const std::vector<CoefficientSpec>& specs,
                                             bool reduced) {
  require(!specs.empty(), "empty_input", "ci_discriminant: no specs");
  int k = specs[0].k();
  int l = static_cast<int>(specs.size()) - 1;
  require(l <= k, "codim_too_high",
          "ci_discriminant: more equations than torus dimension (l > k)");
  std::vector<PointConfiguration> parts;
  for (const auto& s : specs) parts.push_back(s.config);
  auto adm = admissible_subsets(parts);

  CIDiscriminant out;
  out.newton = make_point(Vec(specs[0].n, Rat(0)));
  for (const auto& j : adm) {
    CoefficientSpec cs = cayley_spec(specs, j.indices);
    auto hn = newton_discriminant_hypersurface(cs);
    CIFactor f;
    f.subset = j.indices;
    f.multiplicity = discriminant_multiplicity(cs.config);
    if (reduced && f.multiplicity != 1) {
      std::vector<Vec> scaled;
      for (const auto& v : hn.newton.verts)
        scaled.push_back(vec_scale(v, Rat(1) / Rat(f.multiplicity)));
      f.newton = convex_hull(scaled);
    } else {
      f.newton = hn.newton;
    }
    out.newton = minkowski_sum(out.newton, f.newton);
    out.factors.push_back(std::move(f));
  }
  return out;
}

// --- Analogy of configurations -------------------------------------------------

namespace detail {

// Normal cone of the hull face spanned by a configuration face.
inline Cone config_face_normal_cone(const PointConfiguration& a, const ConfigFace& f) {
  Mat rows;
  const Vec base = a.point_rat(f.point_indices[0]);
  for (size_t u = 0; u < a.hull.vert_count(); ++u)
    rows.push_back(vec_sub(a.hull.verts[u], base));
  // Equalities for the face span, as inequality pairs.
  for (size_t t = 1; t < f.point_indices.size(); ++t) {
    Vec d = vec_sub(a.point_rat(f.point_indices[t]), base);
    rows.push_back(d);
    rows.push_back(vec_scale(d, Rat(-1)));
  }
  return cone_from_inequalities(rows, a.dim);
}

}  // namespace detail

struct NotAnalogousError : MathError {
  explicit NotAnalogousError(const std::string& msg) : MathError("not_analogous", msg) {}
};

// Face correspondence of pairwise analogous configurations: tuples[t][i] is
// the index (into configs[i].faces()) matched to face t of configs[0].
struct AnalogyCorrespondence {
  std::vector<std::vector<int>> tuples;
};

inline AnalogyCorrespondence analogy_correspondence(
    const std::vector<PointConfiguration>& configs) {
  check_defect(!configs.empty(), "analogy: no configurations");
  int k = configs[0].dim;
  for (const auto& c : configs)
    require(c.dim == k, "dim_mismatch", "analogy: ambient mismatch");

  // Canonical normal cones per face, per configuration.
  std::vector<std::vector<Cone>> cones(configs.size());
  for (size_t i = 0; i < configs.size(); ++i)
    for (const auto& f : configs[i].faces())
      cones[i].push_back(detail::config_face_normal_cone(configs[i], f));

  AnalogyCorrespondence corr;
  const auto& base_faces = configs[0].faces();
  for (size_t t = 0; t < base_faces.size(); ++t) {
    std::vector<int> tuple{static_cast<int>(t)};
    for (size_t i = 1; i < configs.size(); ++i) {
      int match = -1;
      for (size_t u = 0; u < cones[i].size(); ++u)
        if (cones[i][u] == cones[0][t]) {
          if (match >= 0)
            throw NotAnalogousError("ambiguous face match between configurations");
          match = static_cast<int>(u);
        }
      if (match < 0)
        throw NotAnalogousError(
            "no matching face: the hulls do not share a normal fan");
      tuple.push_back(match);
    }
    corr.tuples.push_back(std::move(tuple));
  }
  for (size_t i = 1; i < configs.size(); ++i)
    if (configs[i].faces().size() != base_faces.size())
      throw NotAnalogousError("face posets have different sizes");

  // Verify link equality for every matched pair.
  for (size_t t = 0; t < corr.tuples.size(); ++t) {
    const auto& f0 = base_faces[t];
    // Common quotient by the face direction span.
    std::vector<IntVec> kern;
    for (size_t s = 1; s < f0.point_indices.size(); ++s)
      kern.push_back(primitive(vec_sub(configs[0].point_rat(f0.point_indices[s]),
                                        configs[0].point_rat(f0.point_indices[0]))));
    QuotientChart chart = quotient_chart(
        kern.empty() ? IntMatrix(0, k) : IntMatrix(kern), k, Rat(1));

    auto link_of = [&](const PointConfiguration& c, const ConfigFace& f)
        -> std::pair<Polytope, std::optional<Polytope>> {
      // Direction spans must be parallel to the same subspace.
      for (size_t s = 1; s < f.point_indices.size(); ++s) {
        Vec d = vec_sub(c.point_rat(f.point_indices[s]), c.point_rat(f.point_indices[0]));
        if (!is_zero(chart.apply(d)))
          throw NotAnalogousError("matched faces have non-parallel spans");
      }
      std::vector<Vec> all, rest;
      std::vector<int> sorted_face = f.point_indices;
      for (size_t i = 0; i < c.size(); ++i) {
        Vec img = chart.apply(c.point_rat(static_cast<int>(i)));
        all.push_back(img);
        if (!std::binary_search(sorted_face.begin(), sorted_face.end(),
                                static_cast<int>(i)))
          rest.push_back(img);
      }
      Polytope x = convex_hull(all);
      std::optional<Polytope> y;
      if (!rest.empty()) y = convex_hull(rest);
      return {x, y};
    };

    auto [x0, y0] = link_of(configs[0], f0);
    for (size_t i = 1; i < configs.size(); ++i) {
      auto [xi, yi] = link_of(configs[i], configs[i].faces()[corr.tuples[t][i]]);
      bool empty0 = y0.has_value() && *y0 == x0;
      bool emptyi = yi.has_value() && *yi == xi;
      if (empty0 && emptyi) continue;  // both links empty
      if (empty0 != emptyi)
        throw NotAnalogousError("links differ (one is empty)");
      Vec shift = vec_sub(x0.verts[0], xi.verts[0]);
      if (translate(xi, shift) != x0)
        throw NotAnalogousError("links differ (outer hulls)");
      bool rest_match;
      if (y0.has_value() != yi.has_value())
        rest_match = false;
      else
        rest_match = !y0.has_value() || translate(*yi, shift) == *y0;
      if (!rest_match) throw NotAnalogousError("links differ (inner hulls)");
    }
  }
  return corr;
}

// --- The analogous-case formula --------------------------------------------------

namespace detail {

// The mixed fiber monomial Delta_0(A'_0)^{a_0} ... over the common base span
// of the faces: every body is translated into lattice coordinates of the
// direction span (base translations do not move the mixed fiber polytope).
inline Polytope mixed_fiber_monomial(const std::vector<const CoefficientSpec*>& specs,
                                     const std::vector<const ConfigFace*>& faces,
                                     const std::vector<int>& powers) {
  int n = specs[0]->n;
  int k = specs[0]->k();
  // Direction lattice of the common span.
  std::vector<IntVec> dirs;
  for (size_t i = 0; i < specs.size(); ++i) {
    const auto& f = *faces[i];
    for (size_t s = 1; s < f.point_indices.size(); ++s) {
      IntVec d(k);
      for (int c = 0; c < k; ++c)
        d[c] = specs[i]->config.points[f.point_indices[s]][c] -
               specs[i]->config.points[f.point_indices[0]][c];
      d = primitive(to_rat(d));
      dirs.push_back(std::move(d));
    }
  }
  IntMatrix sat = dirs.empty() ? IntMatrix(0, k) : saturation_basis(IntMatrix(dirs));
  int d = static_cast<int>(sat.rows);
  Mat bt = mat_transpose(sat.to_rat());  // k x d

  std::vector<SplitPolytope> args;
  for (size_t i = 0; i < specs.size(); ++i) {
    SplitPolytope body = specs[i]->face_preimage(faces[i]->point_indices);
    // Rewrite the base into span-lattice coordinates, translated per body.
    Vec origin(k);
    for (int c = 0; c < k; ++c)
      origin[c] = Rat(specs[i]->config.points[faces[i]->point_indices[0]][c]);
    std::vector<Vec> pts;
    for (const auto& v : body.poly.verts) {
      Vec base(k);
      for (int c = 0; c < k; ++c) base[c] = v[n + c];
      Vec w(n + d);
      std::copy(v.begin(), v.begin() + n, w.begin());
      if (d > 0) {
        auto y = solve(bt, vec_sub(base, origin));
        check_defect(y.has_value(), "mixed_fiber_monomial: base outside span");
        std::copy(y->begin(), y->end(), w.begin() + n);
      }
      pts.push_back(std::move(w));
    }
    SplitPolytope mapped = make_split(n, d, pts);
    for (int rep = 0; rep < powers[i]; ++rep) args.push_back(mapped);
  }
  check_defect(static_cast<int>(args.size()) == d + 1,
               "mixed_fiber_monomial: composition does not match the span dimension");
  if (d == 0) {
    // Zero-dimensional base: the monomial is the fiber itself (one factor).
    return args[0].fiber_space_projection();
  }
  return mixed_fiber_polytope(args);
}

template <class F>
void compositions_of(int total, int parts, F&& f) {
  std::vector<int> cur;
  std::function<void(int, int)> rec = [&](int rem, int left) {
    if (left == 1) {
      if (rem >= 1) {
        cur.push_back(rem);
        f(cur);
        cur.pop_back();
      }
      return;
    }
    for (int a = 1; a + (left - 1) <= rem; ++a) {
      cur.push_back(a);
      rec(rem - a, left - 1);
      cur.pop_back();
    }
  };
  rec(total, parts);
}

// The shared engine behind Theorem-losung and the higher mixed fiber
// polytope: sum over corresponding face tuples and positive compositions of
// dim A'_0 + 1 of e^{A'_0, A_0}-weighted mixed fiber monomials.
inline VirtualPolytope analogous_face_sum(const std::vector<CoefficientSpec>& specs,
                                          const AnalogyCorrespondence& corr) {
  int n = specs[0].n;
  int l = static_cast<int>(specs.size()) - 1;
  auto table = obstruction_table(specs[0].config);
  size_t full = table.faces.size() - 1;
  VirtualPolytope virt(n);
  for (size_t t = 0; t < corr.tuples.size(); ++t) {
    Int e = table.e[t][full];
    if (e == 0) continue;
    int dprime = table.faces[t].dim;
    if (dprime + 1 < l + 1) continue;  // no positive composition exists
    std::vector<const CoefficientSpec*> sp;
    std::vector<const ConfigFace*> fc;
    for (size_t i = 0; i < specs.size(); ++i) {
      sp.push_back(&specs[i]);
      fc.push_back(&specs[i].config.faces()[corr.tuples[t][i]]);
    }
    compositions_of(dprime + 1, l + 1, [&](const std::vector<int>& powers) {
      Polytope monomial = mixed_fiber_monomial(sp, fc, powers);
      virt.add(Rat(e), monomial);
    });
  }
  return virt;
}

}  // namespace detail

// Theorem-losung fast path for pairwise analogous, full-dimensional
// configurations. Returns the reduced Newton polytope (the 1/|Z^k/M| factor
// is applied).
inline Polytope losung_fast_path(const std::vector<CoefficientSpec>& specs) {
  require(!specs.empty(), "empty_input", "losung: no specs");
  int k = specs[0].k();
  std::vector<PointConfiguration> configs;
  for (const auto& s : specs) configs.push_back(s.config);
  for (const auto& c : configs)
    require(c.hull_dim() == k, "degenerate_config",
            "losung: configuration contained in an affine hyperplane");
  auto corr = analogy_correspondence(configs);

  // |Z^k / M| with M generated by pairwise differences of the sum.
  std::vector<IntVec> gens;
  for (const auto& c : configs)
    for (size_t i = 1; i < c.size(); ++i) {
      IntVec d(k);
      for (int j = 0; j < k; ++j) d[j] = c.points[i][j] - c.points[0][j];
      gens.push_back(std::move(d));
    }
  Int index = lattice_index(IntMatrix(gens), k);

  VirtualPolytope virt = detail::analogous_face_sum(specs, corr);
  VirtualPolytope scaled = scale(virt, Rat(1) / Rat(index));
  return realize_or_throw(scaled, "losung_fast_path");
}

// Higher mixed fiber polytope HP((A_0,Delta_0),...,(A_l,Delta_l)): the
// explicit face-tuple formula, without the lattice-index reduction. Returns
// the origin for l > k.
inline Polytope higher_mixed_fiber(const std::vector<CoefficientSpec>& specs, int l) {
  require(static_cast<int>(specs.size()) == l + 1, "dim_mismatch",
          "higher_mixed_fiber: need l+1 arguments");
  int k = specs[0].k();
  if (l > k) return make_point(Vec(specs[0].n, Rat(0)));
  std::vector<PointConfiguration> configs;
  for (const auto& s : specs) configs.push_back(s.config);
  auto corr = analogy_correspondence(configs);
  VirtualPolytope virt = detail::analogous_face_sum(specs, corr);
  return realize_or_throw(virt, "higher_mixed_fiber");
}

// --- Resultant multiplicity -------------------------------------------------------

struct ResultantMultiplicity {
  bool trivial = false;  // some codim < -1: the resultant is 1
  Int multiplicity = 0;  // d = d1 * d2 (0 when trivial)
  Int d1 = 0, d2 = 0;
  std::vector<int> minimal_subset;  // J_0 when not trivial
};

inline ResultantMultiplicity resultant_multiplicity(
    const std::vector<PointConfiguration>& parts) {
  size_t kp1 = parts.size();
  require(kp1 >= 1, "empty_input", "resultant_multiplicity: no configurations");
  int k = parts[0].dim;
  require(kp1 == static_cast<size_t>(k + 1), "dim_mismatch",
          "resultant_multiplicity: need k+1 configurations in Z^k");
  std::vector<const PointConfiguration*> ptrs;
  for (const auto& p : parts) ptrs.push_back(&p);

  ResultantMultiplicity out;
  std::vector<std::vector<int>> at_minus1;
  for (size_t mask = 1; mask < (size_t(1) << kp1); ++mask) {
    std::vector<int> j;
    for (size_t i = 0; i < kp1; ++i)
      if (mask & (size_t(1) << i)) j.push_back(static_cast<int>(i));
    int codim = detail::sum_dim(ptrs, j) - static_cast<int>(j.size());
    if (codim < -1) {
      out.trivial = true;
      return out;
    }
    if (codim == -1) at_minus1.push_back(j);
  }
  require(!at_minus1.empty(), "no_essential_subset",
          "resultant_multiplicity: no subset of codimension -1");
  // The inclusion-minimal subset (unique by the essential-subset property).
  std::vector<int> j0 = at_minus1[0];
  for (const auto& j : at_minus1)
    if (j.size() < j0.size()) j0 = j;
  for (const auto& j : at_minus1)
    check_defect(std::includes(j.begin(), j.end(), j0.begin(), j0.end()),
                 "resultant_multiplicity: minimal codim -1 subset not unique");
  out.minimal_subset = j0;

  // d1: index of the lattice generated by (sum of the J_0 sets) x {1}.
  std::set<IntVec> sumset{IntVec(k, Int(0))};
  for (int j : j0) {
    std::set<IntVec> next;
    for (const auto& s : sumset)
      for (const auto& p : parts[j].points) {
        IntVec q(k);
        for (int c = 0; c < k; ++c) q[c] = s[c] + p[c];
        next.insert(q);
      }
    sumset = std::move(next);
  }
  std::vector<IntVec> lifted;
  for (const auto& s : sumset) {
    IntVec v(k + 1);
    for (int c = 0; c < k; ++c) v[c] = s[c];
    v[k] = 1;
    lifted.push_back(v);
  }
  out.d1 = lattice_index(IntMatrix(lifted), k + 1);

  // d2: lattice-normalized mixed volume of the projections of the remaining
  // A_j x {1} into the quotient by the span of the lifted sumset.
  std::vector<int> rest;
  for (size_t i = 0; i < kp1; ++i)
    if (!std::binary_search(j0.begin(), j0.end(), static_cast<int>(i)))
      rest.push_back(static_cast<int>(i));
  if (rest.empty()) {
    out.d2 = 1;
  } else {
    QuotientChart chart = quotient_chart(IntMatrix(lifted), k + 1, Rat(1));
    size_t q = chart.quotient_dim();
    check_defect(q == rest.size(), "resultant_multiplicity: quotient dimension");
    std::vector<Polytope> projected;
    for (int j : rest) {
      std::vector<Vec> pts;
      for (const auto& p : parts[j].points) {
        Vec v(k + 1);
        for (int c = 0; c < k; ++c) v[c] = Rat(p[c]);
        v[k] = 1;
        pts.push_back(chart.apply(v));
      }
      projected.push_back(convex_hull(pts));
    }
    Rat mv = mixed_volume(projected, VolumeNormalization::lattice);
    check_defect(rat_den(mv) == 1, "resultant_multiplicity: non-integer d2");
    out.d2 = rat_num(mv);
  }
  out.multiplicity = out.d1 * out.d2;
  return out;
}

// --- Bifurcation sets ---------------------------------------------------------------

struct BifurcationFactor {
  std::vector<int> subset;                    // J
  std::vector<std::vector<int>> face_points;  // per j in J, point indices
  Polytope newton;                            // reduced factor polytope
  bool nonconstant = false;
};

struct BifurcationNewton {
  Polytope newton;
  std::vector<BifurcationFactor> factors;
  int nonconstant_count = 0;
};

namespace detail {

// All compatible full collections of configuration faces: one per face of
// the Minkowski sum of the hulls (including the whole sum).
inline std::vector<std::vector<std::vector<int>>> compatible_collections(
    const std::vector<CoefficientSpec>& specs) {
  size_t l1 = specs.size();
  Polytope hsum = specs[0].config.hull;
  for (size_t i = 1; i < l1; ++i) hsum = minkowski_sum(hsum, specs[i].config.hull);

  std::set<std::vector<std::vector<int>>> seen;
  std::vector<std::vector<std::vector<int>>> out;
  auto record = [&](const Vec& gamma) {
    std::vector<std::vector<int>> collection;
    for (size_t i = 0; i < l1; ++i) {
      auto sd = support_data(specs[i].config.hull, gamma);
      std::vector<int> members;
      for (size_t pi = 0; pi < specs[i].config.size(); ++pi)
        if (dot(gamma, specs[i].config.point_rat(static_cast<int>(pi))) == sd.value)
          members.push_back(static_cast<int>(pi));
      collection.push_back(std::move(members));
    }
    if (seen.insert(collection).second) out.push_back(collection);
  };
  record(Vec(specs[0].k(), Rat(0)));  // the whole collection
  for (const auto& f : hsum.faces()) {
    // Interior functional of the face's normal cone.
    Vec gamma(hsum.ambient, Rat(0));
    for (const auto& fac : hsum.facets)
      if (std::includes(fac.verts.begin(), fac.verts.end(), f.verts.begin(),
                        f.verts.end()))
        for (int c = 0; c < hsum.ambient; ++c) gamma[c] += Rat(fac.normal[c]);
    record(gamma);
  }
  return out;
}

}  // namespace detail

// Newton polytope of the bifurcation-set equation: the Minkowski sum of the
// reduced Cayley discriminant polytopes over all qualifying sub-collections
// of compatible faces, each distinct factor counted once.
inline BifurcationNewton bifurcation_newton(const std::vector<CoefficientSpec>& specs) {
  require(!specs.empty(), "empty_input", "bifurcation_newton: no specs");
  size_t l1 = specs.size();
  int n = specs[0].n;

  auto collections = detail::compatible_collections(specs);

  std::set<std::string> seen;
  BifurcationNewton out;
  out.newton = make_point(Vec(n, Rat(0)));

  for (const auto& col : collections) {
    // Codimensions of all subsets within this collection of faces.
    std::vector<PointConfiguration> face_configs;
    for (size_t i = 0; i < l1; ++i) {
      std::vector<IntVec> pts;
      for (int pi : col[i]) pts.push_back(specs[i].config.points[pi]);
      face_configs.push_back(PointConfiguration::from_points(specs[i].k(), pts));
    }
    std::vector<const PointConfiguration*> ptrs;
    for (const auto& c : face_configs) ptrs.push_back(&c);
    std::vector<int> codim(size_t(1) << l1, 0);
    for (size_t mask = 1; mask < (size_t(1) << l1); ++mask) {
      std::vector<int> j;
      for (size_t i = 0; i < l1; ++i)
        if (mask & (size_t(1) << i)) j.push_back(static_cast<int>(i));
      codim[mask] = detail::sum_dim(ptrs, j) - static_cast<int>(j.size());
    }
    for (size_t mask = 1; mask < (size_t(1) << l1); ++mask) {
      bool admissible = true;
      for (size_t sup = mask; sup < (size_t(1) << l1) && admissible;
           sup = (sup + 1) | mask)
        if (sup != mask && codim[mask] > codim[sup]) admissible = false;
      if (!admissible) continue;
      std::vector<int> j;
      for (size_t i = 0; i < l1; ++i)
        if (mask & (size_t(1) << i)) j.push_back(static_cast<int>(i));
      // Dedupe on the actual restricted data.
      std::string key;
      for (int ji : j) {
        key += std::to_string(ji);
        key += ':';
        for (int pi : col[ji]) {
          key += std::to_string(pi);
          key += ',';
        }
        key += ';';
      }
      if (!seen.insert(key).second) continue;

      std::vector<CoefficientSpec> restricted;
      std::vector<int> local_subset;
      for (size_t pos = 0; pos < j.size(); ++pos) {
        restricted.push_back(specs[j[pos]].restricted_to(col[j[pos]]));
        local_subset.push_back(static_cast<int>(pos));
      }
      CoefficientSpec cs = cayley_spec(restricted, local_subset);
      auto hn = newton_discriminant_hypersurface(cs);
      BifurcationFactor f;
      f.subset = j;
      for (int ji : j) f.face_points.push_back(col[ji]);
      Int mult = discriminant_multiplicity(cs.config);
      if (mult != 1 && !hn.newton.is_point()) {
        std::vector<Vec> scaled;
        for (const auto& v : hn.newton.verts)
          scaled.push_back(vec_scale(v, Rat(1) / Rat(mult)));
        f.newton = convex_hull(scaled);
      } else {
        f.newton = hn.newton;
      }
      bool is_origin = f.newton.is_point() && is_zero(f.newton.verts[0]);
      f.nonconstant = !is_origin;
      if (f.nonconstant) {
        out.newton = minkowski_sum(out.newton, f.newton);
        ++out.nonconstant_count;
      }
      out.factors.push_back(std::move(f));
    }
  }
  std::sort(out.factors.begin(), out.factors.end(),
            [](const BifurcationFactor& a, const BifurcationFactor& b) {
              if (a.subset != b.subset) return a.subset < b.subset;
              return a.face_points < b.face_points;
            });
  return out;
}

// Delzant detection: every configuration is the full set of lattice points
// of a Delzant polytope and all hulls share one normal fan.
inline bool all_delzant_with_common_fan(const std::vector<CoefficientSpec>& specs) {
  int k = specs[0].k();
  NormalFan fan0;
  for (size_t i = 0; i < specs.size(); ++i) {
    const auto& c = specs[i].config;
    if (c.hull_dim() != k) return false;
    // All lattice points present?
    std::vector<Int> lo(k), hi(k);
    for (int j = 0; j < k; ++j) {
      lo[j] = c.points[0][j];
      hi[j] = c.points[0][j];
    }
    for (const auto& p : c.points)
      for (int j = 0; j < k; ++j) {
        lo[j] = std::min(lo[j], p[j]);
        hi[j] = std::max(hi[j], p[j]);
      }
    std::vector<IntVec> lattice;
    std::function<void(int, IntVec&)> enumerate = [&](int coord, IntVec& cur) {
      if (coord == k) {
        if (c.hull.contains(to_rat(cur))) lattice.push_back(cur);
        return;
      }
      for (Int v = lo[coord]; v <= hi[coord]; ++v) {
        cur[coord] = v;
        enumerate(coord + 1, cur);
      }
    };
    IntVec cur(k);
    enumerate(0, cur);
    std::sort(lattice.begin(), lattice.end());
    if (lattice != c.points) return false;
    // Delzant: at every vertex the primitive edge directions form a basis.
    for (size_t vi = 0; vi < c.hull.vert_count(); ++vi) {
      std::vector<IntVec> dirs;
      for (const auto& e : c.hull.edges()) {
        int other = -1;
        if (e[0] == static_cast<int>(vi)) other = e[1];
        if (e[1] == static_cast<int>(vi)) other = e[0];
        if (other < 0) continue;
        dirs.push_back(primitive(vec_sub(c.hull.verts[other], c.hull.verts[vi])));
      }
      if (static_cast<int>(dirs.size()) != k) return false;
      Mat m;
      for (const auto& d : dirs) m.push_back(to_rat(d));
      Rat det = determinant(m);
      if (det != 1 && det != -1) return false;
    }
    NormalFan f = normal_fan(c.hull);
    if (i == 0)
      fan0 = f;
    else if (!(f == fan0))
      return false;
  }
  return true;
}

// The Delzant shortcut: the composition sum of mixed fiber monomials over
// all compatible face collections, with composition total k+1. Collections
// whose faces sum degenerately contribute nothing.
inline Polytope bifurcation_newton_delzant(const std::vector<CoefficientSpec>& specs) {
  require(all_delzant_with_common_fan(specs), "not_delzant",
          "bifurcation_newton_delzant: preconditions not met");
  int n = specs[0].n, k = specs[0].k();
  int l = static_cast<int>(specs.size()) - 1;
  auto collections = detail::compatible_collections(specs);
  VirtualPolytope virt(n);
  for (const auto& col : collections) {
    std::vector<const CoefficientSpec*> sp;
    std::vector<const ConfigFace*> fc;
    std::vector<ConfigFace> storage(specs.size());
    bool faces_ok = true;
    for (size_t i = 0; i < specs.size(); ++i) {
      int fi = specs[i].config.face_index(col[i]);
      if (fi < 0) { faces_ok = false; break; }
      storage[i] = specs[i].config.faces()[fi];
    }
    if (!faces_ok) continue;
    // The fixed-base monomial vanishes unless the faces sum full-dimensionally.
    std::vector<const PointConfiguration*> ptrs;
    std::vector<PointConfiguration> face_cfgs;
    for (size_t i = 0; i < specs.size(); ++i) {
      std::vector<IntVec> pts;
      for (int pi : col[i]) pts.push_back(specs[i].config.points[pi]);
      face_cfgs.push_back(PointConfiguration::from_points(k, pts));
    }
    for (const auto& c : face_cfgs) ptrs.push_back(&c);
    std::vector<int> all_idx(specs.size());
    for (size_t i = 0; i < specs.size(); ++i) all_idx[i] = static_cast<int>(i);
    if (detail::sum_dim(ptrs, all_idx) < k) continue;
    for (size_t i = 0; i < specs.size(); ++i) {
      sp.push_back(&specs[i]);
      fc.push_back(&storage[i]);
    }
    detail::compositions_of(k + 1, l + 1, [&](const std::vector<int>& powers) {
      // Assemble the bodies in the full base R^k and polarize there.
      std::vector<SplitPolytope> args;
      for (size_t i = 0; i < specs.size(); ++i) {
        SplitPolytope body = sp[i]->face_preimage(fc[i]->point_indices);
        for (int rep = 0; rep < powers[i]; ++rep) args.push_back(body);
      }
      virt.add(Rat(1), mixed_fiber_polytope(args));
    });
  }
  return realize_or_throw(virt, "bifurcation_newton_delzant");
}

// --- Leading exponents ----------------------------------------------------------------

// The combinatorial exponent d^{Gtilde, Gamma}: the sum over bounded faces
// Gamma' of Delta containing Gamma, compatible with Gtilde and with
// dim A_{Gamma'} = dim Abar_{Gamma'}, of c^{A_Gamma, A_{Gamma'}} *
// e^{Abar_{Gamma'}, A}.
inline Int leading_exponent(const CoefficientSpec& spec,
                            const std::vector<int>& ntilde_face_verts,
                            const Polytope& newton,
                            const std::vector<int>& gamma_face_verts) {
  int n = spec.n, k = spec.k();
  SplitPolytope delta = spec.assembled();
  const Polytope& dp = delta.poly;
  auto table = obstruction_table(spec.config);
  size_t full = table.faces.size() - 1;

  // Configuration points hit by a face of Delta.
  auto config_points_of = [&](const std::vector<int>& face_verts) {
    std::vector<Vec> base_pts;
    for (int vi : face_verts) {
      Vec b(k);
      for (int j = 0; j < k; ++j) b[j] = dp.verts[vi][n + j];
      base_pts.push_back(std::move(b));
    }
    Polytope q_img = convex_hull(base_pts);
    std::vector<int> members;
    for (size_t pi = 0; pi < spec.config.size(); ++pi)
      if (q_img.contains(spec.config.point_rat(static_cast<int>(pi))))
        members.push_back(static_cast<int>(pi));
    return members;
  };

  auto minimal_face_containing = [&](const std::vector<int>& subset) {
    int best = -1;
    for (size_t fi = 0; fi < table.faces.size(); ++fi) {
      const auto& f = table.faces[fi];
      if (std::includes(f.point_indices.begin(), f.point_indices.end(), subset.begin(),
                        subset.end())) {
        if (best < 0 ||
            f.point_indices.size() < table.faces[best].point_indices.size())
          best = static_cast<int>(fi);
      }
    }
    check_defect(best >= 0, "leading_exponent: no face contains the subset");
    return best;
  };

  std::vector<int> gamma_sorted = gamma_face_verts;
  std::sort(gamma_sorted.begin(), gamma_sorted.end());
  std::vector<int> a_gamma = config_points_of(gamma_sorted);

  Int d = 0;
  for (const auto& gp : dp.faces()) {
    if (!std::includes(gp.verts.begin(), gp.verts.end(), gamma_sorted.begin(),
                       gamma_sorted.end()))
      continue;
    std::vector<int> a_gp = config_points_of(gp.verts);
    int abar = minimal_face_containing(a_gp);
    // dim A_{Gamma'} must equal dim of its minimal enclosing face.
    std::vector<Vec> a_gp_pts;
    for (int pi : a_gp) a_gp_pts.push_back(spec.config.point_rat(pi));
    if (detail::affine_dim(a_gp_pts) != table.faces[abar].dim) continue;

    // Compatibility with the face of the Newton polytope: a functional
    // (gamma, eta) minimizing exactly on Gamma' whose fiber part gamma
    // minimizes exactly on Gtilde.
    {
      Mat a_eq;
      Vec b_eq;
      Mat a_ge;
      Vec b_ge;
      size_t nv = n + k;
      auto push_delta_row = [&](int vi, int v0, bool strict) {
        Vec row(nv, Rat(0));
        for (size_t c = 0; c < nv; ++c) row[c] = dp.verts[vi][c] - dp.verts[v0][c];
        if (strict) {
          a_ge.push_back(std::move(row));
          b_ge.push_back(Rat(1));
        } else {
          a_eq.push_back(std::move(row));
          b_eq.push_back(Rat(0));
        }
      };
      int v0 = gp.verts[0];
      for (int vi : gp.verts)
        if (vi != v0) push_delta_row(vi, v0, false);
      for (size_t vi = 0; vi < dp.vert_count(); ++vi)
        if (!std::binary_search(gp.verts.begin(), gp.verts.end(), static_cast<int>(vi)))
          push_delta_row(static_cast<int>(vi), v0, true);
      // The fiber part acts on the Newton polytope.
      int u0 = ntilde_face_verts[0];
      auto push_newton_row = [&](int ui, bool strict) {
        Vec row(nv, Rat(0));
        for (int c = 0; c < n; ++c) row[c] = newton.verts[ui][c] - newton.verts[u0][c];
        if (strict) {
          a_ge.push_back(std::move(row));
          b_ge.push_back(Rat(1));
        } else {
          a_eq.push_back(std::move(row));
          b_eq.push_back(Rat(0));
        }
      };
      std::vector<int> nt_sorted = ntilde_face_verts;
      std::sort(nt_sorted.begin(), nt_sorted.end());
      for (int ui : nt_sorted)
        if (ui != u0) push_newton_row(ui, false);
      for (size_t ui = 0; ui < newton.vert_count(); ++ui)
        if (!std::binary_search(nt_sorted.begin(), nt_sorted.end(), static_cast<int>(ui)))
          push_newton_row(static_cast<int>(ui), true);
      if (!lp_feasible(a_eq, b_eq, a_ge, b_ge, nv).feasible) continue;
    }

    // c^{A_Gamma, A_{Gamma'}} inside the configuration spanned by A_{Gamma'}.
    PointConfiguration sub = PointConfiguration::from_points(
        spec.config.dim, [&] {
          std::vector<IntVec> pts;
          for (int pi : a_gp) pts.push_back(spec.config.points[pi]);
          return pts;
        }());
    std::vector<int> in_sub;
    bool subset_ok = true;
    for (int pi : a_gamma) {
      auto it = std::lower_bound(sub.points.begin(), sub.points.end(),
                                 spec.config.points[pi]);
      if (it == sub.points.end() || *it != spec.config.points[pi]) {
        subset_ok = false;
        break;
      }
      in_sub.push_back(static_cast<int>(it - sub.points.begin()));
    }
    if (!subset_ok) continue;
    std::sort(in_sub.begin(), in_sub.end());
    Int c = milnor_number_c(sub, in_sub);
    d += c * table.e[abar][full];
  }
  return d;
}

// --- Critical point counts (worked 3-dimensional example) ------------------------------

struct CriticalPointCounts {
  Int curve = 0;    // critical points of the height on f = g = 0
  Int surface = 0;  // critical points of the height on f = 0
};

// Counts for a 3-dimensional integer polytope with the first coordinate
// vertical: 12 Vol + 2 sum d_i S_i over vertical 2-faces, and
// 6 Vol + 2 sum d_i S_i + sum e_i l_i adding the vertical edges.
inline CriticalPointCounts critical_points_counts(const Polytope& delta) {
  require(delta.ambient == 3 && delta.dim == 3, "dim_mismatch",
          "critical_points_counts: need a 3-dimensional polytope in R^3");
  for (const auto& v : delta.verts)
    for (const auto& x : v)
      require(rat_den(x) == 1, "not_integer", "critical_points_counts: integer vertices required");

  // All lattice points of the polytope.
  IntVec lo(3), hi(3);
  for (int j = 0; j < 3; ++j) {
    lo[j] = rat_num(delta.verts[0][j]);
    hi[j] = lo[j];
  }
  for (const auto& v : delta.verts)
    for (int j = 0; j < 3; ++j) {
      lo[j] = std::min(lo[j], rat_num(v[j]));
      hi[j] = std::max(hi[j], rat_num(v[j]));
    }
  std::vector<IntVec> pts;
  for (Int x = lo[0]; x <= hi[0]; ++x)
    for (Int y = lo[1]; y <= hi[1]; ++y)
      for (Int z = lo[2]; z <= hi[2]; ++z) {
        Vec p{Rat(x), Rat(y), Rat(z)};
        if (delta.contains(p)) pts.push_back(IntVec{x, y, z});
      }
  PointConfiguration cfg = PointConfiguration::from_points(3, pts);
  auto table = obstruction_table(cfg);
  size_t full = table.faces.size() - 1;

  Vec vertical{Rat(1), Rat(0), Rat(0)};
  Rat vol = lebesgue_volume(delta);
  Rat face_term = 0, edge_term = 0;
  for (size_t fi = 0; fi < table.faces.size(); ++fi) {
    const auto& f = table.faces[fi];
    if (f.dim != 1 && f.dim != 2) continue;
    std::vector<Vec> fpts;
    for (int pi : f.point_indices) fpts.push_back(cfg.point_rat(pi));
    Polytope hull = convex_hull(fpts);
    if (static_cast<size_t>(fi) == full) continue;
    // Vertical: the first coordinate direction lies in the span.
    Mat dirs;
    for (size_t i = 1; i < hull.vert_count(); ++i)
      dirs.push_back(vec_sub(hull.verts[i], hull.verts[0]));
    Mat with_e1 = dirs;
    with_e1.push_back(vertical);
    bool is_vertical = mat_rank(with_e1) == mat_rank(dirs);
    if (!is_vertical) continue;
    if (f.dim == 2) {
      Rat area = lattice_volume(hull) / 2;  // Lebesgue area in the face lattice
      face_term += Rat(table.e[fi][full]) * area;
    } else {
      Rat len = lattice_volume(hull);
      edge_term += Rat(table.e[fi][full]) * len;
    }
  }
  CriticalPointCounts out;
  Rat curve = 12 * vol + 2 * face_term;
  Rat surface = 6 * vol + 2 * face_term + edge_term;
  check_defect(rat_den(curve) == 1 && rat_den(surface) == 1,
               "critical_points_counts: non-integer count");
  out.curve = rat_num(curve);
  out.surface = rat_num(surface);
  return out;
}

}  // namespace polydisc
