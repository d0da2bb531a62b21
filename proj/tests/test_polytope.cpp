#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polydisc/polytope.hpp"

#include <random>

using namespace polydisc;

namespace {

Vec v2(long a, long b) { return Vec{Rat(a), Rat(b)}; }
Vec v3(long a, long b, long c) { return Vec{Rat(a), Rat(b), Rat(c)}; }

Polytope unit_square() { return convex_hull({v2(0, 0), v2(1, 0), v2(0, 1), v2(1, 1)}); }

std::vector<Vec> random_points(std::mt19937_64& rng, int dim, int count, int lo, int hi) {
  std::uniform_int_distribution<int> dist(lo, hi);
  std::vector<Vec> pts;
  for (int i = 0; i < count; ++i) {
    Vec p(dim);
    for (int j = 0; j < dim; ++j) p[j] = dist(rng);
    pts.push_back(p);
  }
  return pts;
}

}  // namespace

TEST_CASE("hull removes interior and duplicate points") {
  auto p = convex_hull({v2(0, 0), v2(1, 0), v2(0, 1), v2(1, 1), Vec{Rat(1, 2), Rat(1, 2)}});
  CHECK(p.vert_count() == 4);
  CHECK(p.dim == 2);
  CHECK(p.facets.size() == 4);
}

TEST_CASE("hull of collinear points is a segment") {
  auto p = convex_hull({Vec{Rat(0)}, Vec{Rat(1)}, Vec{Rat(2)}});
  CHECK(p.vert_count() == 2);
  CHECK(p.dim == 1);
  CHECK(p.verts[0][0] == 0);
  CHECK(p.verts[1][0] == 2);
}

TEST_CASE("hull of a single point") {
  auto p = convex_hull({v2(3, 4)});
  CHECK(p.dim == 0);
  CHECK(p.vert_count() == 1);
  CHECK(p.contains(v2(3, 4)));
  CHECK(!p.contains(v2(3, 5)));
}

TEST_CASE("lower-dimensional hull in higher ambient space") {
  auto p = convex_hull({v3(0, 0, 1), v3(1, 0, 1), v3(0, 1, 1), v3(1, 1, 1)});
  CHECK(p.dim == 2);
  CHECK(p.vert_count() == 4);
  CHECK(p.facets.size() == 4);
  CHECK(p.contains(Vec{Rat(1, 2), Rat(1, 2), Rat(1)}));
  CHECK(!p.contains(Vec{Rat(1, 2), Rat(1, 2), Rat(2)}));
}

TEST_CASE("support data uses the min convention") {
  auto sq = unit_square();
  auto s1 = support_data(sq, v2(1, 1));
  CHECK(s1.value == 0);
  CHECK(s1.face_verts.size() == 1);
  CHECK(sq.verts[s1.face_verts[0]] == v2(0, 0));

  auto s2 = support_data(sq, v2(-1, 0));
  CHECK(s2.value == -1);
  CHECK(s2.face_verts.size() == 2);  // the right edge

  auto seg = convex_hull({Vec{Rat(0)}, Vec{Rat(2)}});
  auto s3 = support_data(seg, Vec{Rat(3)});
  CHECK(s3.value == 0);
}

TEST_CASE("minkowski sum") {
  auto sq = unit_square();
  auto dbl = minkowski_sum(sq, sq);
  CHECK(dbl == scale_polytope(sq, Rat(2)));

  auto ex = convex_hull({v2(0, 0), v2(1, 0)});
  auto ey = convex_hull({v2(0, 0), v2(0, 1)});
  CHECK(minkowski_sum(ex, ey) == sq);

  auto pt = make_point(v2(5, -2));
  CHECK(minkowski_sum(sq, pt) == translate(sq, v2(5, -2)));

  CHECK_THROWS_AS(minkowski_sum(sq, convex_hull({Vec{Rat(0)}})), MathError);
}

TEST_CASE("support additivity under minkowski sum") {
  std::mt19937_64 rng(31337);
  for (int trial = 0; trial < 15; ++trial) {
    int d = 2 + static_cast<int>(rng() % 2);
    auto p = convex_hull(random_points(rng, d, 6, -3, 3));
    auto q = convex_hull(random_points(rng, d, 6, -3, 3));
    auto s = minkowski_sum(p, q);
    for (int k = 0; k < 12; ++k) {
      Vec l(d);
      std::uniform_int_distribution<int> dist(-4, 4);
      for (int j = 0; j < d; ++j) l[j] = dist(rng);
      CHECK(support_value(s, l) == support_value(p, l) + support_value(q, l));
    }
  }
}

TEST_CASE("volumes") {
  CHECK(lebesgue_volume(unit_square()) == 1);
  CHECK(lattice_volume(unit_square()) == 2);  // 2! * 1

  auto simplex3 = convex_hull({v3(0, 0, 0), v3(1, 0, 0), v3(0, 1, 0), v3(0, 0, 1)});
  CHECK(lebesgue_volume(simplex3) == Rat(1, 6));
  CHECK(lattice_volume(simplex3) == 1);

  auto seg = convex_hull({Vec{Rat(0)}, Vec{Rat(2)}});
  CHECK(lattice_volume(seg) == 2);

  CHECK(lattice_volume(make_point(v2(7, 8))) == 1);

  // Sparse segment in the plane: lattice length w.r.t. Z^2.
  auto diag = convex_hull({v2(0, 0), v2(2, 2)});
  CHECK(lattice_volume(diag) == 2);
  CHECK(lebesgue_volume(diag) == 0);  // lower-dimensional in R^2
}

TEST_CASE("lattice volume is translation invariant") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    int d = 2 + static_cast<int>(rng() % 2);
    auto p = convex_hull(random_points(rng, d, 7, -3, 3));
    Vec t(d);
    std::uniform_int_distribution<int> dist(-5, 5);
    for (int j = 0; j < d; ++j) t[j] = dist(rng);
    CHECK(lattice_volume(p) == lattice_volume(translate(p, t)));
  }
}

TEST_CASE("face lattice of the square") {
  auto sq = unit_square();
  const auto& fs = sq.faces();
  CHECK(fs.size() == 9);  // 4 vertices + 4 edges + 1 facet
  int n0 = 0, n1 = 0, n2 = 0;
  for (const auto& f : fs) {
    if (f.dim == 0) ++n0;
    if (f.dim == 1) ++n1;
    if (f.dim == 2) ++n2;
  }
  CHECK(n0 == 4);
  CHECK(n1 == 4);
  CHECK(n2 == 1);
  CHECK(sq.edges().size() == 4);
}

TEST_CASE("face lattice of the cube") {
  std::vector<Vec> pts;
  for (int i = 0; i < 8; ++i) pts.push_back(v3(i & 1, (i >> 1) & 1, (i >> 2) & 1));
  auto cube = convex_hull(pts);
  CHECK(cube.facets.size() == 6);
  CHECK(cube.edges().size() == 12);
  CHECK(cube.faces().size() == 8 + 12 + 6 + 1);
}

TEST_CASE("truncation and slicing") {
  auto sq = unit_square();
  auto half = truncate_below(sq, v2(1, 0), Rat(1, 2));
  REQUIRE(half.has_value());
  CHECK(lebesgue_volume(*half) == Rat(1, 2));

  auto empty = truncate_below(sq, v2(1, 0), Rat(-1));
  CHECK(!empty.has_value());

  auto sl = slice_at(sq, {0}, Vec{Rat(1, 2)});
  REQUIRE(sl.has_value());
  CHECK(sl->dim == 1);
  CHECK(sl->vert_count() == 2);
}

TEST_CASE("centroid") {
  auto sq = unit_square();
  auto c = centroid(sq);
  CHECK(c == Vec{Rat(1, 2), Rat(1, 2)});
  auto tri = convex_hull({v2(0, 0), v2(3, 0), v2(0, 3)});
  CHECK(centroid(tri) == Vec{Rat(1), Rat(1)});
  // A non-simplex where the vertex average differs from the center of mass.
  auto quad = convex_hull({v2(0, 0), v2(4, 0), v2(0, 2), v2(4, 4)});
  auto cq = centroid(quad);
  CHECK(quad.contains(cq));
  Rat vol = lebesgue_volume(quad);
  CHECK(vol == 12);
  // Center of mass of the two triangles (0,0),(4,0),(4,4) and (0,0),(4,4),(0,2),
  // weighted by areas 8 and 4.
  CHECK(cq[0] == (Rat(8) * Rat(8, 3) + Rat(4) * Rat(4, 3)) / 12);
  CHECK(cq[1] == (Rat(8) * Rat(4, 3) + Rat(4) * Rat(2)) / 12);
  // The plain vertex average would be (2, 3/2) != center of mass.
  CHECK(cq != v2(2, 1) );
}

TEST_CASE("hull in dimension 5 with many points stays exact") {
  std::mt19937_64 rng(555);
  auto pts = random_points(rng, 5, 60, 0, 4);
  auto p = convex_hull(pts);
  CHECK(p.dim == 5);
  // Every input point lies inside.
  for (const auto& x : pts) CHECK(p.contains(x));
  // Every vertex is not in the hull of the others (spot check a few).
  for (size_t i = 0; i < std::min<size_t>(p.vert_count(), 5); ++i) {
    std::vector<Vec> others;
    for (size_t j = 0; j < p.vert_count(); ++j)
      if (j != i) others.push_back(p.verts[j]);
    CHECK(!convex_hull(others).contains(p.verts[i]));
  }
}
