#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polydisc/normal_fan.hpp"
#include "polydisc/virtual_polytope.hpp"
#include "polydisc/volume.hpp"

#include <random>

using namespace polydisc;

namespace {

Vec v2(long a, long b) { return Vec{Rat(a), Rat(b)}; }

Polytope unit_square() { return convex_hull({v2(0, 0), v2(1, 0), v2(0, 1), v2(1, 1)}); }
Polytope seg_x() { return convex_hull({v2(0, 0), v2(1, 0)}); }
Polytope seg_y() { return convex_hull({v2(0, 0), v2(0, 1)}); }

Polytope random_polytope(std::mt19937_64& rng, int dim, int pts, int lo, int hi) {
  std::uniform_int_distribution<int> dist(lo, hi);
  std::vector<Vec> v;
  for (int i = 0; i < pts; ++i) {
    Vec p(dim);
    for (int j = 0; j < dim; ++j) p[j] = dist(rng);
    v.push_back(p);
  }
  return convex_hull(v);
}

}  // namespace

TEST_CASE("mixed volume basics") {
  CHECK(mixed_volume({unit_square(), unit_square()}) == 1);
  CHECK(mixed_volume({seg_x(), seg_y()}) == Rat(1, 2));
  CHECK(mixed_volume({seg_x(), seg_x()}) == 0);
  CHECK(mixed_volume({seg_x(), seg_y()}, VolumeNormalization::lattice) == 1);
}

TEST_CASE("mv zero criterion") {
  CHECK(mv_zero_criterion({seg_x(), seg_x()}));
  CHECK(!mv_zero_criterion({unit_square(), unit_square()}));
  CHECK(!mv_zero_criterion({seg_x(), seg_y()}));
}

TEST_CASE("zero criterion matches vanishing of the mixed volume") {
  std::mt19937_64 rng(808);
  for (int trial = 0; trial < 40; ++trial) {
    int d = 2 + static_cast<int>(rng() % 2);
    std::vector<Polytope> ps;
    for (int i = 0; i < d; ++i) {
      int kind = static_cast<int>(rng() % 3);
      // Mix in genuinely degenerate inputs: segments alongside full bodies.
      ps.push_back(kind == 0 ? random_polytope(rng, d, 2, 0, 2)
                             : random_polytope(rng, d, 5, 0, 2));
    }
    CHECK((mixed_volume(ps) == 0) == mv_zero_criterion(ps));
  }
}

TEST_CASE("mixed volume symmetry and multilinearity") {
  std::mt19937_64 rng(515);
  for (int trial = 0; trial < 10; ++trial) {
    int d = 2 + static_cast<int>(rng() % 2);
    std::vector<Polytope> ps;
    for (int i = 0; i < d; ++i) ps.push_back(random_polytope(rng, d, 5, 0, 3));
    Rat base = mixed_volume(ps);
    auto perm = ps;
    std::shuffle(perm.begin(), perm.end(), rng);
    CHECK(mixed_volume(perm) == base);

    Polytope extra = random_polytope(rng, d, 5, 0, 3);
    auto lhs_args = ps;
    lhs_args[0] = minkowski_sum(ps[0], extra);
    auto rhs_args = ps;
    rhs_args[0] = extra;
    CHECK(mixed_volume(lhs_args) == base + mixed_volume(rhs_args));
  }
}

TEST_CASE("mixed volume monotone on nested polytopes") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    int d = 2;
    std::vector<Polytope> small, big;
    for (int i = 0; i < d; ++i) {
      auto p = random_polytope(rng, d, 4, 0, 2);
      small.push_back(p);
      std::vector<Vec> pts = p.verts;
      auto q = random_polytope(rng, d, 2, 0, 2);
      for (const auto& v : q.verts) pts.push_back(v);
      big.push_back(convex_hull(pts));
    }
    CHECK(mixed_volume(small) <= mixed_volume(big));
  }
}

TEST_CASE("mixed volume of pairs") {
  SUBCASE("trivial cone reduces to a difference of mixed volumes") {
    std::vector<PolytopePair> pairs{
        {ConePolyhedron{unit_square(), {}}, ConePolyhedron{seg_x(), {}}},
        {ConePolyhedron{scale_polytope(unit_square(), 2), {}},
         ConePolyhedron{seg_y(), {}}}};
    Rat expect = mixed_volume({unit_square(), scale_polytope(unit_square(), 2)}) -
                 mixed_volume({seg_x(), seg_y()});
    CHECK(mixed_volume_pairs(pairs, {}) == expect);
  }
  SUBCASE("equal pairs cancel") {
    std::vector<IntVec> rays{IntVec{Int(1), Int(0)}, IntVec{Int(0), Int(1)}};
    ConePolyhedron p{unit_square(), rays};
    std::vector<PolytopePair> pairs{{p, p}, {p, p}};
    CHECK(mixed_volume_pairs(pairs, rays) == 0);
  }
  SUBCASE("one-dimensional signed length: (a+R+, b+R+) gives b-a") {
    std::vector<IntVec> rays{IntVec{Int(1)}};
    ConePolyhedron a{make_point(Vec{Rat(1)}), rays};
    ConePolyhedron b{make_point(Vec{Rat(4)}), rays};
    std::vector<PolytopePair> pairs{{a, b}};
    CHECK(mixed_volume_pairs(pairs, rays) == 3);
  }
  SUBCASE("independent of the truncation depth") {
    // The small polyhedron touches both boundary rays of the cone, so the
    // symmetric difference is a bounded region near the apex.
    std::vector<IntVec> rays{IntVec{Int(1), Int(0)}, IntVec{Int(1), Int(2)}};
    ConePolyhedron big{make_point(v2(0, 0)), rays};
    ConePolyhedron small{convex_hull({v2(1, 0), v2(1, 2)}), rays};
    std::vector<PolytopePair> pairs{{big, small}, {big, small}};
    Rat v = mixed_volume_pairs(pairs, rays, Rat(0));
    CHECK(v == mixed_volume_pairs(pairs, rays, Rat(7)));
    CHECK(v == 1);  // the clipped region conv{(0,0),(1,0),(1,2)} has area 1
  }
  SUBCASE("unbounded symmetric difference is rejected") {
    std::vector<IntVec> rays{IntVec{Int(1), Int(0)}};
    ConePolyhedron a{unit_square(), rays};
    ConePolyhedron b{translate(unit_square(), v2(0, 5)), rays};
    std::vector<PolytopePair> pairs{{a, b}, {a, a}};
    CHECK_THROWS_AS(mixed_volume_pairs(pairs, rays), MathError);
  }
}

TEST_CASE("shadow volume examples") {
  CHECK(shadow_volume_lebesgue(unit_square()) == 1);
  auto tri = convex_hull({v2(0, 0), v2(1, 0), v2(0, 1)});
  CHECK(shadow_volume_lebesgue(tri) == Rat(1, 2));
  auto shifted = translate(unit_square(), v2(-1, 0));  // t in [-1, 0]
  CHECK(shadow_volume_lebesgue(shifted) == 0);
}

TEST_CASE("shadow volume through a quotient chart") {
  // Identity chart with normalization 2 doubles the integral.
  auto chart = quotient_chart(IntMatrix(0, 1), 1, Rat(2));
  CHECK(shadow_volume(unit_square(), chart) == 2);
}

TEST_CASE("mixed shadow volume") {
  auto sq = unit_square();
  SUBCASE("diagonal case") {
    CHECK(mixed_shadow_volume({sq, sq}) == shadow_volume_lebesgue(sq));
  }
  SUBCASE("translation along t adds s/(m+1) times the base volume") {
    auto up = translate(sq, v2(2, 0));
    CHECK(mixed_shadow_volume({up, sq}) == Rat(1) + Rat(2, 2) * Rat(1));
  }
  SUBCASE("dilatation along t scales linearly") {
    std::vector<Vec> pts;
    for (const auto& v : sq.verts) pts.push_back(Vec{3 * v[0], v[1]});
    auto d3 = convex_hull(pts);
    CHECK(mixed_shadow_volume({d3, d3}) == 3 * mixed_shadow_volume({sq, sq}));
  }
  SUBCASE("symmetry and multilinearity") {
    std::mt19937_64 rng(246);
    for (int trial = 0; trial < 8; ++trial) {
      auto a = random_polytope(rng, 2, 5, 0, 3);
      auto b = random_polytope(rng, 2, 5, 0, 3);
      auto c = random_polytope(rng, 2, 4, 0, 3);
      CHECK(mixed_shadow_volume({a, b}) == mixed_shadow_volume({b, a}));
      CHECK(mixed_shadow_volume({minkowski_sum(a, c), b}) ==
            mixed_shadow_volume({a, b}) + mixed_shadow_volume({c, b}));
    }
  }
}

TEST_CASE("milnor fiber euler characteristic") {
  SUBCASE("one variable: the fiber of t^a has a points") {
    std::vector<IntVec> rays{IntVec{Int(1)}};
    for (long a = 1; a <= 4; ++a) {
      ConePolyhedron cone_poly{make_point(Vec{Rat(0)}), rays};
      ConePolyhedron shifted{make_point(Vec{Rat(a)}), rays};
      std::vector<PolytopePair> pairs{{cone_poly, shifted}};
      CHECK(milnor_fiber_euler(pairs, rays, 1) == a);
    }
  }
  SUBCASE("smooth quadrant: 2!V = 1, matrix entry m!V-2 = -1, obstruction 1") {
    std::vector<IntVec> rays{IntVec{Int(1), Int(0)}, IntVec{Int(0), Int(1)}};
    ConePolyhedron quadrant{make_point(v2(0, 0)), rays};
    ConePolyhedron hull_off_origin{convex_hull({v2(1, 0), v2(0, 1)}), rays};
    std::vector<PolytopePair> pairs{{quadrant, hull_off_origin}};
    Rat v = mixed_volume_pairs({{quadrant, hull_off_origin},
                                {quadrant, hull_off_origin}},
                               rays);
    CHECK(v == Rat(1, 2));          // Vol of the quadrant minus the hull
    CHECK(2 * v - 2 == -1);         // the documented matrix entry for even m
    CHECK(2 - 2 * v == 1);          // the smooth-cone obstruction
    CHECK(milnor_fiber_euler(pairs, rays, 2) == -1);
    std::vector<PolytopePair> diag{{quadrant, hull_off_origin},
                                   {quadrant, hull_off_origin}};
    CHECK(milnor_fiber_euler(diag, rays, 2) == 1);  // (-1)^0 2! V = 1
  }
  SUBCASE("a trivial pair kills every composition") {
    std::vector<IntVec> rays{IntVec{Int(1), Int(0)}, IntVec{Int(0), Int(1)}};
    ConePolyhedron quadrant{make_point(v2(0, 0)), rays};
    ConePolyhedron other{convex_hull({v2(2, 0), v2(0, 2)}), rays};
    std::vector<PolytopePair> pairs{{quadrant, quadrant}, {quadrant, other}};
    CHECK(milnor_fiber_euler(pairs, rays, 2) == 0);
  }
}

TEST_CASE("prism mixed volume identity (l=1, m=2)") {
  // sum over I of (-1)^(2-|I|) (2+|I|-1)! Vol(P_I) = 2 MV(P_0, P_1), with
  // P_I the Cayley prism in R^2 x R^1 and volumes in the affine-span
  // lattice; both sides computed independently.
  std::mt19937_64 rng(1712);
  for (int trial = 0; trial < 10; ++trial) {
    auto p0 = random_polytope(rng, 2, 5, 0, 3);
    auto p1 = random_polytope(rng, 2, 5, 0, 3);
    auto lift = [&](const Polytope& p, long level) {
      std::vector<Vec> pts;
      for (const auto& v : p.verts) pts.push_back(Vec{v[0], v[1], Rat(level)});
      return pts;
    };
    auto pts0 = lift(p0, 0);
    auto pts1 = lift(p1, 1);
    std::vector<Vec> all = pts0;
    all.insert(all.end(), pts1.begin(), pts1.end());
    Rat lhs = Rat(factorial(3)) * span_lattice_lebesgue_volume(convex_hull(all)) -
              Rat(factorial(2)) * (span_lattice_lebesgue_volume(convex_hull(pts0)) +
                                   span_lattice_lebesgue_volume(convex_hull(pts1)));
    CHECK(lhs == Rat(2) * mixed_volume({p0, p1}));
  }
}

TEST_CASE("minkowski difference via virtual polytopes") {
  auto sq = unit_square();
  SUBCASE("[0,2]^2 minus [0,1]^2") {
    VirtualPolytope v(2);
    v.add(Rat(1), scale_polytope(sq, 2));
    v.add(Rat(-1), sq);
    auto r = realize(v);
    REQUIRE(std::holds_alternative<Polytope>(r));
    CHECK(std::get<Polytope>(r) == sq);
  }
  SUBCASE("roundtrip (P+Q) - Q = P on random polytopes") {
    std::mt19937_64 rng(654);
    for (int trial = 0; trial < 50; ++trial) {
      int d = 2 + static_cast<int>(rng() % 2);
      auto p = random_polytope(rng, d, 6, -3, 3);
      auto q = random_polytope(rng, d, 6, -3, 3);
      VirtualPolytope v(d);
      v.add(Rat(1), minkowski_sum(p, q));
      v.add(Rat(-1), q);
      auto r = realize(v);
      REQUIRE(std::holds_alternative<Polytope>(r));
      CHECK(std::get<Polytope>(r) == p);
    }
  }
  SUBCASE("triangle minus a segment is not realizable") {
    auto tri = convex_hull({v2(0, 0), v2(1, 0), v2(0, 1)});
    VirtualPolytope v(2);
    v.add(Rat(1), tri);
    v.add(Rat(-1), seg_x());
    auto r = realize(v);
    CHECK(std::holds_alternative<NotRealizable>(r));
  }
  SUBCASE("realize(virtual(P)) = P") {
    std::mt19937_64 rng(321);
    for (int trial = 0; trial < 10; ++trial) {
      auto p = random_polytope(rng, 3, 6, -2, 2);
      auto r = realize(VirtualPolytope(p));
      REQUIRE(std::holds_alternative<Polytope>(r));
      CHECK(std::get<Polytope>(r) == p);
    }
  }
  SUBCASE("scaling examples") {
    auto s0 = realize(scale(VirtualPolytope(sq), Rat(0)));
    CHECK(std::get<Polytope>(s0) == make_point(v2(0, 0)));
    auto seg3 = convex_hull({Vec{Rat(0)}, Vec{Rat(3)}});
    auto third = realize(scale(VirtualPolytope(seg3), Rat(1, 3)));
    CHECK(std::get<Polytope>(third) == convex_hull({Vec{Rat(0)}, Vec{Rat(1)}}));
    auto twice = realize(scale(VirtualPolytope(sq), Rat(2)));
    CHECK(std::get<Polytope>(twice) == scale_polytope(sq, 2));
  }
  SUBCASE("virtual equality is decided on refinement rays") {
    std::mt19937_64 rng(987);
    for (int trial = 0; trial < 10; ++trial) {
      auto p = random_polytope(rng, 2, 5, 0, 3);
      auto q = random_polytope(rng, 2, 5, 0, 3);
      VirtualPolytope v(2);
      v.add(Rat(1), minkowski_sum(p, q));
      v.add(Rat(-1), q);
      CHECK(virtual_equal(v, VirtualPolytope(p)));
      VirtualPolytope w(2);
      w.add(Rat(1), translate(p, v2(1, 0)));
      CHECK(!virtual_equal(v, w));
    }
  }
}

TEST_CASE("normal fans") {
  auto sq = unit_square();
  auto fan = normal_fan(sq);
  CHECK(fan.maximal.size() == 4);
  for (const auto& c : fan.maximal) {
    CHECK(c.dim == 2);
    CHECK(c.rays.size() == 2);
  }
  SUBCASE("refinement with itself is idempotent") {
    auto r = common_refinement({fan, fan});
    CHECK(r == fan);
  }
  SUBCASE("two segments refine to the quadrant fan") {
    auto fx = normal_fan(seg_x());
    auto fy = normal_fan(seg_y());
    auto r = common_refinement({fx, fy});
    CHECK(r == fan);
  }
}
