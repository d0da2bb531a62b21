#pragma once

// Exact integer lattice computations: Hermite and Smith normal forms,
// lattice indices, saturation, and quotient charts. These normal forms carry
// every volume normalization in the library, so all of it is arbitrary
// precision and overflow-free by construction.

#include "polydisc/linalg.hpp"
#include "polydisc/rational.hpp"

namespace polydisc {

struct IntMatrix {
  size_t rows = 0, cols = 0;
  std::vector<IntVec> entries;  // row-major

  IntMatrix() = default;
  IntMatrix(size_t r, size_t c) : rows(r), cols(c), entries(r, IntVec(c, Int(0))) {}
  explicit IntMatrix(std::vector<IntVec> e)
      : rows(e.size()), cols(e.empty() ? 0 : e[0].size()), entries(std::move(e)) {}

  Int& at(size_t i, size_t j) { return entries[i][j]; }
  const Int& at(size_t i, size_t j) const { return entries[i][j]; }

  static IntMatrix identity(size_t n) {
    IntMatrix m(n, n);
    for (size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  bool operator==(const IntMatrix& o) const { return entries == o.entries; }

  Mat to_rat() const {
    Mat m(rows, Vec(cols));
    for (size_t i = 0; i < rows; ++i)
      for (size_t j = 0; j < cols; ++j) m[i][j] = Rat(entries[i][j]);
    return m;
  }
};

inline IntMatrix int_mat_mul(const IntMatrix& a, const IntMatrix& b) {
  check_defect(a.cols == b.rows, "int_mat_mul: shape mismatch");
  IntMatrix r(a.rows, b.cols);
  for (size_t i = 0; i < a.rows; ++i)
    for (size_t k = 0; k < a.cols; ++k)
      if (a.at(i, k) != 0)
        for (size_t j = 0; j < b.cols; ++j) r.at(i, j) += a.at(i, k) * b.at(k, j);
  return r;
}

// Row Hermite normal form: returns (h, u) with u unimodular, u*m = h,
// pivots positive, and entries above each pivot reduced into [0, pivot).
inline std::pair<IntMatrix, IntMatrix> hermite_form(const IntMatrix& m) {
  IntMatrix h = m;
  IntMatrix u = IntMatrix::identity(m.rows);
  size_t r = 0;
  for (size_t c = 0; c < m.cols && r < m.rows; ++c) {
    // Clear the column below row r with gcd steps.
    for (size_t i = r + 1; i < m.rows; ++i) {
      while (h.at(i, c) != 0) {
        if (h.at(r, c) == 0) { std::swap(h.entries[r], h.entries[i]); std::swap(u.entries[r], u.entries[i]); continue; }
        Int q = h.at(i, c) / h.at(r, c);
        if (q != 0)
          for (size_t j = 0; j < std::max(m.cols, m.rows); ++j) {
            if (j < m.cols) h.at(i, j) -= q * h.at(r, j);
            if (j < m.rows) u.at(i, j) -= q * u.at(r, j);
          }
        if (h.at(i, c) != 0) { std::swap(h.entries[r], h.entries[i]); std::swap(u.entries[r], u.entries[i]); }
      }
    }
    if (h.at(r, c) == 0) continue;
    if (h.at(r, c) < 0) {
      for (auto& x : h.entries[r]) x = -x;
      for (auto& x : u.entries[r]) x = -x;
    }
    // Reduce entries above the pivot.
    for (size_t i = 0; i < r; ++i) {
      Int q = h.at(i, c) >= 0 ? h.at(i, c) / h.at(r, c)
                              : -((-h.at(i, c) + h.at(r, c) - 1) / h.at(r, c));
      if (q != 0) {
        for (size_t j = 0; j < m.cols; ++j) h.at(i, j) -= q * h.at(r, j);
        for (size_t j = 0; j < m.rows; ++j) u.at(i, j) -= q * u.at(r, j);
      }
    }
    ++r;
  }
  return {h, u};
}

// Smith normal form data. d holds the diagonal invariants d1 | d2 | ... and
// vinv is the inverse of the accumulated column transform: if D = U M V then
// the row lattice of M equals the lattice spanned by d_i * (row i of vinv).
struct SmithResult {
  std::vector<Int> invariants;  // nonzero invariants only, d1 | d2 | ...
  size_t rank = 0;
  IntMatrix v;     // cols x cols, unimodular
  IntMatrix vinv;  // v^{-1}
};

inline SmithResult smith_form(const IntMatrix& m_in) {
  IntMatrix a = m_in;
  size_t rows = a.rows, cols = a.cols;
  IntMatrix v = IntMatrix::identity(cols);
  IntMatrix vinv = IntMatrix::identity(cols);

  auto col_sub = [&](size_t dst, size_t src, const Int& q) {
    // column dst -= q * column src;  v tracks, vinv gets the inverse op.
    for (size_t i = 0; i < rows; ++i) a.at(i, dst) -= q * a.at(i, src);
    for (size_t i = 0; i < cols; ++i) v.at(i, dst) -= q * v.at(i, src);
    for (size_t j = 0; j < cols; ++j) vinv.at(src, j) += q * vinv.at(dst, j);
  };
  auto col_swap = [&](size_t x, size_t y) {
    for (size_t i = 0; i < rows; ++i) std::swap(a.at(i, x), a.at(i, y));
    for (size_t i = 0; i < cols; ++i) std::swap(v.at(i, x), v.at(i, y));
    std::swap(vinv.entries[x], vinv.entries[y]);
  };
  auto col_neg = [&](size_t x) {
    for (size_t i = 0; i < rows; ++i) a.at(i, x) = -a.at(i, x);
    for (size_t i = 0; i < cols; ++i) v.at(i, x) = -v.at(i, x);
    for (size_t j = 0; j < cols; ++j) vinv.at(x, j) = -vinv.at(x, j);
  };
  auto row_sub = [&](size_t dst, size_t src, const Int& q) {
    for (size_t j = 0; j < cols; ++j) a.at(dst, j) -= q * a.at(src, j);
  };

  size_t t = 0;
  while (t < rows && t < cols) {
    // Find a nonzero pivot at or after (t, t).
    size_t pi = rows, pj = cols;
    for (size_t i = t; i < rows && pi == rows; ++i)
      for (size_t j = t; j < cols; ++j)
        if (a.at(i, j) != 0) { pi = i; pj = j; break; }
    if (pi == rows) break;
    if (pi != t) std::swap(a.entries[pi], a.entries[t]);
    if (pj != t) col_swap(pj, t);

    bool clean = false;
    while (!clean) {
      clean = true;
      for (size_t i = t + 1; i < rows; ++i)
        while (a.at(i, t) != 0) {
          Int q = a.at(i, t) / a.at(t, t);
          row_sub(i, t, q);
          if (a.at(i, t) != 0) { std::swap(a.entries[i], a.entries[t]); clean = false; }
        }
      for (size_t j = t + 1; j < cols; ++j)
        while (a.at(t, j) != 0) {
          Int q = a.at(t, j) / a.at(t, t);
          col_sub(j, t, q);
          if (a.at(t, j) != 0) { col_swap(j, t); clean = false; }
        }
    }
    if (a.at(t, t) < 0) col_neg(t);
    ++t;
  }
  // Enforce divisibility d_i | d_{i+1}.
  for (size_t i = 0; i + 1 < t; ++i)
    for (size_t j = i + 1; j < t; ++j)
      if (a.at(j, j) % a.at(i, i) != 0) {
        // Fold a(j,j) into position i: add column j to column i, then redo
        // the 2x2 block with gcd steps.
        col_sub(i, j, Int(-1));
        size_t tt = i;
        bool c2 = false;
        while (!c2) {
          c2 = true;
          while (a.at(j, tt) != 0) {
            Int q = a.at(j, tt) / a.at(tt, tt);
            row_sub(j, tt, q);
            if (a.at(j, tt) != 0) { std::swap(a.entries[j], a.entries[tt]); c2 = false; }
          }
          while (a.at(tt, j) != 0) {
            Int q = a.at(tt, j) / a.at(tt, tt);
            col_sub(j, tt, q);
            if (a.at(tt, j) != 0) { col_swap(j, tt); c2 = false; }
          }
        }
        if (a.at(i, i) < 0) col_neg(i);
        if (a.at(j, j) < 0) col_neg(j);
        j = i;  // recheck this row of the divisibility chain
      }

  SmithResult res;
  res.rank = t;
  for (size_t i = 0; i < t; ++i) res.invariants.push_back(a.at(i, i));
  res.v = std::move(v);
  res.vinv = std::move(vinv);
  return res;
}

// Index of the lattice generated by the rows of `sub` inside its saturation
// L cap Z^dim: the product of the nonzero Smith invariants.
inline Int lattice_index(const IntMatrix& sub, size_t dim) {
  check_defect(sub.cols == dim || sub.rows == 0, "lattice_index: wrong width");
  if (sub.rows == 0) return 1;
  auto s = smith_form(sub);
  Int idx = 1;
  for (const auto& d : s.invariants) idx *= d;
  return idx;
}

// Basis of the saturation (L tensor Q) cap Z^dim of the row lattice of m.
inline IntMatrix saturation_basis(const IntMatrix& m) {
  auto s = smith_form(m);
  std::vector<IntVec> rows;
  for (size_t i = 0; i < s.rank; ++i) rows.push_back(s.vinv.entries[i]);
  return IntMatrix(std::move(rows));
}

// Linear chart onto the quotient of Z^dim by a saturated sublattice.
//
// kernel_basis spans the subspace being divided out (saturated), projection
// maps Z^dim onto Z^(dim - r) with kernel exactly that subspace, and
// normalization rescales quotient volumes so the image of the fundamental
// cell has the prescribed volume.
struct QuotientChart {
  size_t ambient_dim = 0;
  IntMatrix kernel;      // r x dim, saturated basis of the divided subspace
  IntMatrix projection;  // (dim - r) x dim, surjective onto Z^(dim-r)
  Rat normalization = 1;

  size_t quotient_dim() const { return projection.rows; }

  Vec apply(const Vec& x) const {
    Vec r(projection.rows, Rat(0));
    for (size_t i = 0; i < projection.rows; ++i)
      for (size_t j = 0; j < projection.cols; ++j)
        if (projection.at(i, j) != 0) r[i] += Rat(projection.at(i, j)) * x[j];
    return r;
  }
};

inline QuotientChart quotient_chart(const IntMatrix& kernel_generators, size_t dim,
                                    const Rat& target_normalization) {
  QuotientChart chart;
  chart.ambient_dim = dim;
  chart.normalization = target_normalization;
  if (kernel_generators.rows == 0) {
    chart.kernel = IntMatrix(0, dim);
    chart.projection = IntMatrix::identity(dim);
    return chart;
  }
  check_defect(kernel_generators.cols == dim, "quotient_chart: wrong width");
  auto s = smith_form(kernel_generators);
  size_t r = s.rank;
  std::vector<IntVec> ker_rows, proj_rows;
  for (size_t i = 0; i < r; ++i) ker_rows.push_back(s.vinv.entries[i]);
  // Rows r..dim-1 of (vinv)^{-T} = columns r..dim-1 of v, transposed.
  for (size_t j = r; j < dim; ++j) {
    IntVec row(dim);
    for (size_t i = 0; i < dim; ++i) row[i] = s.v.at(i, j);
    proj_rows.push_back(std::move(row));
  }
  chart.kernel = IntMatrix(std::move(ker_rows));
  chart.projection = IntMatrix(std::move(proj_rows));
  // Invariant: projection annihilates the kernel.
  for (size_t i = 0; i < chart.projection.rows; ++i)
    for (size_t j = 0; j < chart.kernel.rows; ++j) {
      Int acc = 0;
      for (size_t t = 0; t < dim; ++t)
        acc += chart.projection.at(i, t) * chart.kernel.at(j, t);
      check_defect(acc == 0, "quotient_chart: projection does not kill kernel");
    }
  return chart;
}

}  // namespace polydisc
