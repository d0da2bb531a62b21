#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polydisc/fiber.hpp"

#include <random>

using namespace polydisc;

namespace {

SplitPolytope random_split(std::mt19937_64& rng, int n, int k, int pts) {
  std::uniform_int_distribution<int> dist(0, 3);
  std::vector<Vec> v;
  for (int i = 0; i < pts; ++i) {
    Vec p(n + k);
    for (int j = 0; j < n + k; ++j) p[j] = dist(rng);
    v.push_back(p);
  }
  return make_split(n, k, v);
}

// The triangle conv{(e0;0),(e1;1),(e2;2)} in R^3 + R^1.
SplitPolytope paper_triangle() {
  std::vector<Vec> pts{
      Vec{Rat(1), Rat(0), Rat(0), Rat(0)},
      Vec{Rat(0), Rat(1), Rat(0), Rat(1)},
      Vec{Rat(0), Rat(0), Rat(1), Rat(2)}};
  return make_split(3, 1, pts);
}

}  // namespace

TEST_CASE("chamber complex of the paper triangle") {
  auto cc = chamber_complex(paper_triangle());
  REQUIRE(cc.chambers.size() == 2);
  CHECK(cc.chambers[0].normalized_volume == 2);
  CHECK(cc.chambers[1].normalized_volume == 2);
  CHECK(cc.chambers[0].barycenter == Vec{Rat(1, 2)});
  CHECK(cc.chambers[1].barycenter == Vec{Rat(3, 2)});
}

TEST_CASE("chamber complex of a product has a single chamber") {
  // P x Q with P = [0,1] fiber, Q = [0,1]^2 base.
  std::vector<Vec> pts;
  for (int p = 0; p <= 1; ++p)
    for (int a = 0; a <= 1; ++a)
      for (int b = 0; b <= 1; ++b) pts.push_back(Vec{Rat(p), Rat(a), Rat(b)});
  auto d = make_split(1, 2, pts);
  auto cc = chamber_complex(d);
  CHECK(cc.chambers.size() == 1);
  CHECK(cc.chambers[0].chamber == d.base());
  CHECK(cc.chambers[0].normalized_volume == 6);  // (1+2)! * 1
}

TEST_CASE("chamber complex over a point") {
  std::vector<Vec> pts{Vec{Rat(0), Rat(5)}, Vec{Rat(2), Rat(5)}};
  auto d = make_split(1, 1, pts);
  auto cc = chamber_complex(d);
  REQUIRE(cc.chambers.size() == 1);
  CHECK(cc.chambers[0].normalized_volume == 1);
  CHECK(cc.base_span_dim == 0);
}

TEST_CASE("fiber polytope examples") {
  SUBCASE("product case P x Q -> (k+1)! Vol(Q) . P") {
    std::vector<Vec> pts{Vec{Rat(0), Rat(0)}, Vec{Rat(0), Rat(1)},
                         Vec{Rat(1), Rat(0)}, Vec{Rat(1), Rat(1)}};
    auto d = make_split(1, 1, pts);
    auto fp = fiber_polytope(d);
    CHECK(fp == convex_hull({Vec{Rat(0)}, Vec{Rat(2)}}));
  }
  SUBCASE("paper triangle integrates to the stated segment") {
    auto fp = fiber_polytope(paper_triangle());
    CHECK(fp == convex_hull({Vec{Rat(1), Rat(2), Rat(1)}, Vec{Rat(2), Rat(0), Rat(2)}}));
  }
  SUBCASE("point projection returns the fiber itself") {
    std::vector<Vec> pts{Vec{Rat(3), Rat(7)}};
    auto d = make_split(1, 1, pts);
    CHECK(fiber_polytope(d) == make_point(Vec{Rat(3)}));
  }
}

TEST_CASE("integer split polytopes have integer fiber polytopes") {
  std::mt19937_64 rng(1001);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 1 + static_cast<int>(rng() % 2);
    int k = 1 + static_cast<int>(rng() % 2);
    auto d = random_split(rng, n, k, 4 + static_cast<int>(rng() % 2));
    auto fp = fiber_polytope(d);
    for (const auto& v : fp.verts)
      for (const auto& x : v) CHECK(rat_den(x) == 1);
  }
}

TEST_CASE("mixed fiber polytope") {
  SUBCASE("diagonal equals the fiber polytope") {
    auto d = paper_triangle();
    auto mf = mixed_fiber_polytope({d, d});
    CHECK(mf == fiber_polytope(d));
  }
  SUBCASE("two unit squares give a segment of length (k+1)! MV = 2") {
    std::vector<Vec> pts{Vec{Rat(0), Rat(0)}, Vec{Rat(0), Rat(1)},
                         Vec{Rat(1), Rat(0)}, Vec{Rat(1), Rat(1)}};
    auto sq = make_split(1, 1, pts);
    auto mf = mixed_fiber_polytope({sq, sq});
    CHECK(mf.dim == 1);
    CHECK(lattice_volume(mf) == 2);
  }
  SUBCASE("translation covariance in the fiber direction") {
    std::mt19937_64 rng(77);
    auto d0 = random_split(rng, 2, 1, 5);
    std::vector<Vec> moved;
    for (const auto& v : d0.poly.verts)
      moved.push_back(Vec{v[0] + 3, v[1], v[2]});
    auto d1 = make_split(2, 1, moved);
    auto mf0 = mixed_fiber_polytope({d0, d0});
    auto mf01 = mixed_fiber_polytope({d0, d1});
    // MF(D, D + t) = MF(D, D) + (multilinear share of the translation):
    // for k=1 the shift contributes half of (k+1)! = 1 copy of t per slot.
    CHECK(mf01.vert_count() == mf0.vert_count());
  }
  SUBCASE("degenerate common projection collapses to the origin") {
    std::vector<Vec> pts{Vec{Rat(0), Rat(0), Rat(0)}, Vec{Rat(1), Rat(0), Rat(0)}};
    auto flat = make_split(1, 2, pts);  // base projection is a point in R^2
    auto mf = mixed_fiber_polytope({flat, flat, flat});
    CHECK(mf == make_point(Vec{Rat(0)}));
  }
}

TEST_CASE("support oracle agrees with the constructed mixed fiber polytope") {
  std::mt19937_64 rng(424242);
  std::uniform_int_distribution<int> fdist(-3, 3);
  for (int inst = 0; inst < 10; ++inst) {
    int n = 1 + static_cast<int>(rng() % 3);
    int k = 1 + static_cast<int>(rng() % 2);
    std::vector<SplitPolytope> ds;
    for (int i = 0; i < k + 1; ++i) ds.push_back(random_split(rng, n, k, 4));
    Polytope mf = mixed_fiber_polytope(ds);
    for (int t = 0; t < 10; ++t) {
      Vec gamma(n);
      for (int j = 0; j < n; ++j) gamma[j] = fdist(rng);
      CHECK(support_value(mf, gamma) == mf_support_oracle(ds, gamma));
    }
  }
}

TEST_CASE("oracle on the diagonal reduces to the fiber polytope support") {
  auto d = paper_triangle();
  Vec g1{Rat(1), Rat(0), Rat(0)};
  CHECK(mf_support_oracle({d, d}, g1) == support_value(fiber_polytope(d), g1));
  CHECK(mf_support_oracle({d, d}, g1) == 1);  // min of the first coordinate
}

TEST_CASE("mixed fiber symmetry and multilinearity") {
  std::mt19937_64 rng(5150);
  for (int trial = 0; trial < 6; ++trial) {
    int n = 1 + static_cast<int>(rng() % 2);
    int k = 1;
    auto a = random_split(rng, n, k, 4);
    auto b = random_split(rng, n, k, 4);
    auto c = random_split(rng, n, k, 4);
    CHECK(mixed_fiber_polytope({a, b}) == mixed_fiber_polytope({b, a}));
    auto lhs = mixed_fiber_polytope({split_minkowski_sum(a, c), b});
    auto rhs = minkowski_sum(mixed_fiber_polytope({a, b}), mixed_fiber_polytope({c, b}));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("mixed fiber monotonicity under fiberwise containment") {
  std::mt19937_64 rng(31415);
  for (int trial = 0; trial < 6; ++trial) {
    int n = 2, k = 1;
    std::vector<SplitPolytope> small, big;
    for (int i = 0; i < k + 1; ++i) {
      auto d = random_split(rng, n, k, 4);
      small.push_back(d);
      // Enlarge fibers without changing the projection: add points above
      // existing base values.
      std::vector<Vec> pts = d.poly.verts;
      std::uniform_int_distribution<int> dist(0, 3);
      for (int extra = 0; extra < 2; ++extra) {
        const Vec& host = d.poly.verts[rng() % d.poly.vert_count()];
        Vec p(n + k);
        for (int j = 0; j < n; ++j) p[j] = dist(rng);
        for (int j = 0; j < k; ++j) p[n + j] = host[n + j];
        pts.push_back(p);
      }
      big.push_back(make_split(n, k, pts));
    }
    auto mf_small = mixed_fiber_polytope(small);
    auto mf_big = mixed_fiber_polytope(big);
    for (const auto& v : mf_small.verts) CHECK(mf_big.contains(v));
  }
}

TEST_CASE("cayley prism identity for fiber polytopes (k=1, l=1)") {
  // Int of the prism over two bodies equals Int P0 + Int P1 + MF(P0, P1),
  // all computed independently.
  std::mt19937_64 rng(2718);
  for (int trial = 0; trial < 6; ++trial) {
    int n = 1 + static_cast<int>(rng() % 2);
    auto p0 = random_split(rng, n, 1, 4);
    auto p1 = random_split(rng, n, 1, 4);
    if (p0.base().dim < 1 || p1.base().dim < 1) continue;
    std::vector<Vec> prism_pts;
    for (const auto& v : p0.poly.verts) {
      Vec w(n + 2);
      std::copy(v.begin(), v.end(), w.begin());
      w[n + 1] = 0;
      prism_pts.push_back(w);
    }
    for (const auto& v : p1.poly.verts) {
      Vec w(n + 2);
      std::copy(v.begin(), v.end(), w.begin());
      w[n + 1] = 1;
      prism_pts.push_back(w);
    }
    auto prism = make_split(n, 2, prism_pts);
    Polytope lhs = fiber_polytope(prism);
    Polytope rhs = minkowski_sum(
        minkowski_sum(fiber_polytope(p0), fiber_polytope(p1)),
        mixed_fiber_polytope({p0, p1}));
    CHECK(lhs == rhs);
  }
}
