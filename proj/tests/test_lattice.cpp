#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polydisc/int_matrix.hpp"
#include "polydisc/lp.hpp"

#include <random>

using namespace polydisc;

namespace {

IntMatrix im(std::vector<std::vector<long>> rows) {
  std::vector<IntVec> e;
  for (auto& r : rows) {
    IntVec v;
    for (long x : r) v.push_back(Int(x));
    e.push_back(v);
  }
  return IntMatrix(std::move(e));
}

Int int_det(const IntMatrix& m) {
  Mat r = m.to_rat();
  Rat d = determinant(r);
  CHECK(rat_den(d) == 1);
  return rat_num(d);
}

}  // namespace

TEST_CASE("hermite form basics") {
  auto [h1, u1] = hermite_form(IntMatrix::identity(2));
  CHECK(h1 == IntMatrix::identity(2));
  CHECK(u1 == IntMatrix::identity(2));

  auto [h2, u2] = hermite_form(im({{2, 0}, {0, 3}}));
  CHECK(h2 == im({{2, 0}, {0, 3}}));

  auto m = im({{1, 2}, {3, 4}});
  auto [h3, u3] = hermite_form(m);
  CHECK(h3.at(0, 0) == 1);
  CHECK(h3.at(1, 1) == 2);
  CHECK(h3.at(1, 0) == 0);
  CHECK(abs(int_det(u3)) == 1);
  CHECK(int_mat_mul(u3, m) == h3);
}

TEST_CASE("hermite form randomized: u unimodular and u*m = h") {
  std::mt19937_64 rng(12345);
  std::uniform_int_distribution<int> dist(-5, 5);
  std::uniform_int_distribution<int> sz(1, 5);
  for (int trial = 0; trial < 60; ++trial) {
    size_t r = sz(rng), c = sz(rng);
    IntMatrix m(r, c);
    for (size_t i = 0; i < r; ++i)
      for (size_t j = 0; j < c; ++j) m.at(i, j) = dist(rng);
    auto [h, u] = hermite_form(m);
    CHECK(abs(int_det(u)) == 1);
    CHECK(int_mat_mul(u, m) == h);
    // Row echelon shape: pivot columns strictly increase.
    long last = -1;
    for (size_t i = 0; i < r; ++i) {
      long p = -1;
      for (size_t j = 0; j < c; ++j)
        if (h.at(i, j) != 0) { p = static_cast<long>(j); break; }
      if (p >= 0) {
        CHECK(p > last);
        last = p;
      }
    }
  }
}

TEST_CASE("lattice index") {
  CHECK(lattice_index(im({{2, 0}, {0, 3}}), 2) == 6);
  CHECK(lattice_index(im({{2}}), 1) == 2);
  CHECK(lattice_index(im({{0, 1}, {2, 1}, {4, 1}}), 2) == 2);
  // Rank deficient: index inside the saturation of the row span.
  CHECK(lattice_index(im({{2, 4}, {1, 2}}), 2) == 1);
  CHECK(lattice_index(im({{2, 4}, {4, 8}}), 2) == 2);
}

TEST_CASE("lattice index invariant under unimodular row operations") {
  std::mt19937_64 rng(777);
  std::uniform_int_distribution<int> dist(-5, 5);
  for (int trial = 0; trial < 40; ++trial) {
    IntMatrix m(3, 3);
    for (size_t i = 0; i < 3; ++i)
      for (size_t j = 0; j < 3; ++j) m.at(i, j) = dist(rng);
    Int before = lattice_index(m, 3);
    // Apply a few random elementary row operations.
    IntMatrix w = m;
    for (int k = 0; k < 5; ++k) {
      size_t i = rng() % 3, j = rng() % 3;
      if (i == j) continue;
      Int q = dist(rng);
      for (size_t c = 0; c < 3; ++c) w.at(i, c) += q * w.at(j, c);
    }
    CHECK(lattice_index(w, 3) == before);
  }
}

TEST_CASE("smith form invariant chain divides") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> dist(-6, 6);
  for (int trial = 0; trial < 50; ++trial) {
    size_t r = 1 + rng() % 4, c = 1 + rng() % 4;
    IntMatrix m(r, c);
    for (size_t i = 0; i < r; ++i)
      for (size_t j = 0; j < c; ++j) m.at(i, j) = dist(rng);
    auto s = smith_form(m);
    for (size_t i = 0; i + 1 < s.invariants.size(); ++i) {
      CHECK(s.invariants[i] > 0);
      CHECK(s.invariants[i + 1] % s.invariants[i] == 0);
    }
    // vinv really is the inverse of v.
    CHECK(int_mat_mul(s.v, s.vinv) == IntMatrix::identity(c));
  }
}

TEST_CASE("quotient chart") {
  SUBCASE("quotient of R^2 by span{(1,1)}") {
    auto chart = quotient_chart(im({{1, 1}}), 2, Rat(1));
    CHECK(chart.quotient_dim() == 1);
    Vec k{Rat(1), Rat(1)};
    CHECK(is_zero(chart.apply(k)));
    // The image of Z^2 is exactly Z^1: (1,0) and (0,1) map to generators.
    Vec e0{Rat(1), Rat(0)}, e1{Rat(0), Rat(1)};
    Rat a = chart.apply(e0)[0], b = chart.apply(e1)[0];
    CHECK(rat_den(a) == 1);
    CHECK(rat_den(b) == 1);
    CHECK(int_gcd(rat_num(a), rat_num(b)) == 1);
  }
  SUBCASE("trivial kernel keeps identity with chosen normalization") {
    auto chart = quotient_chart(IntMatrix(0, 2), 2, Rat(2));
    CHECK(chart.quotient_dim() == 2);
    CHECK(chart.normalization == 2);
  }
  SUBCASE("full kernel gives zero-dimensional chart") {
    auto chart = quotient_chart(im({{1, 0}, {0, 1}}), 2, Rat(1));
    CHECK(chart.quotient_dim() == 0);
  }
  SUBCASE("saturation applied first") {
    // (2,0) spans the same space as (1,0); the chart must use the saturation.
    auto chart = quotient_chart(im({{2, 0}}), 2, Rat(1));
    CHECK(chart.quotient_dim() == 1);
    Vec e0{Rat(1), Rat(0)};
    CHECK(is_zero(chart.apply(e0)));
    Vec e1{Rat(0), Rat(1)};
    CHECK(abs(rat_num(chart.apply(e1)[0])) == 1);
  }
}

TEST_CASE("quotient chart pushes the full lattice onto the quotient lattice") {
  std::mt19937_64 rng(4242);
  std::uniform_int_distribution<int> dist(-4, 4);
  for (int trial = 0; trial < 30; ++trial) {
    size_t d = 2 + rng() % 3;
    size_t kr = 1 + rng() % (d - 1);
    IntMatrix gens(kr, d);
    for (size_t i = 0; i < kr; ++i)
      for (size_t j = 0; j < d; ++j) gens.at(i, j) = dist(rng);
    auto chart = quotient_chart(gens, d, Rat(1));
    size_t q = chart.quotient_dim();
    // Images of the standard basis must generate Z^q (index 1).
    IntMatrix imgs(d, q);
    for (size_t i = 0; i < d; ++i)
      for (size_t j = 0; j < q; ++j) imgs.at(i, j) = chart.projection.at(j, i);
    if (q > 0) CHECK(lattice_index(imgs, q) == 1);
    // Kernel generators map to zero.
    for (size_t i = 0; i < gens.rows; ++i) {
      Vec g(d);
      for (size_t j = 0; j < d; ++j) g[j] = Rat(gens.at(i, j));
      CHECK(is_zero(chart.apply(g)));
    }
  }
}

TEST_CASE("lp feasibility") {
  // x >= 1, -x >= -3 (i.e. 1 <= x <= 3), feasible.
  auto r1 = lp_feasible({}, {}, {{Rat(1)}, {Rat(-1)}}, {Rat(1), Rat(-3)}, 1);
  CHECK(r1.feasible);
  CHECK(r1.witness[0] >= 1);
  CHECK(r1.witness[0] <= 3);
  // x >= 1, -x >= 0: infeasible.
  auto r2 = lp_feasible({}, {}, {{Rat(1)}, {Rat(-1)}}, {Rat(1), Rat(0)}, 1);
  CHECK(!r2.feasible);
  // Equalities: x + y = 1, x - y >= 2.
  auto r3 = lp_feasible({{Rat(1), Rat(1)}}, {Rat(1)}, {{Rat(1), Rat(-1)}}, {Rat(2)}, 2);
  CHECK(r3.feasible);
  CHECK(r3.witness[0] + r3.witness[1] == 1);
  CHECK(r3.witness[0] - r3.witness[1] >= 2);
  // Strict cone: x > 0 and x < 0 scaled to >= 1: infeasible.
  auto r4 = lp_feasible({}, {}, {{Rat(1)}, {Rat(-1)}}, {Rat(1), Rat(1)}, 1);
  CHECK(!r4.feasible);
}
