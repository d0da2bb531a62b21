#pragma once

// Dense exact rational linear algebra at desk scale: rank, solving, kernels,
// inversion. Row vectors throughout; a Mat is a list of rows.

#include "polydisc/rational.hpp"

#include <optional>

namespace polydisc {

using Mat = std::vector<Vec>;

inline Mat mat_identity(size_t n) {
  Mat m(n, Vec(n, Rat(0)));
  for (size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline Vec mat_apply(const Mat& m, const Vec& x) {
  Vec r(m.size(), Rat(0));
  for (size_t i = 0; i < m.size(); ++i) r[i] = dot(m[i], x);
  return r;
}

inline Mat mat_mul(const Mat& a, const Mat& b) {
  size_t n = a.size(), k = b.size(), cols = k ? b[0].size() : 0;
  Mat r(n, Vec(cols, Rat(0)));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < k; ++j)
      if (a[i][j] != 0)
        for (size_t c = 0; c < cols; ++c) r[i][c] += a[i][j] * b[j][c];
  return r;
}

inline Mat mat_transpose(const Mat& a) {
  if (a.empty()) return {};
  Mat r(a[0].size(), Vec(a.size(), Rat(0)));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[i].size(); ++j) r[j][i] = a[i][j];
  return r;
}

// Fraction-free-ish Gaussian elimination to row echelon form.
// Returns the rank; `m` is modified in place. Records pivot columns.
inline size_t row_echelon(Mat& m, std::vector<size_t>* pivot_cols = nullptr) {
  size_t rows = m.size();
  size_t cols = rows ? m[0].size() : 0;
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t p = r;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    Rat inv = Rat(1) / m[r][c];
    for (size_t j = c; j < cols; ++j) m[r][j] *= inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rat f = m[i][c];
      for (size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    if (pivot_cols) pivot_cols->push_back(c);
    ++r;
  }
  return r;
}

inline size_t mat_rank(Mat m) { return row_echelon(m); }

inline size_t rank_of_vectors(const std::vector<Vec>& vs) {
  Mat m(vs.begin(), vs.end());
  return mat_rank(std::move(m));
}

// One solution of A x = b, if any.
inline std::optional<Vec> solve(const Mat& a, const Vec& b) {
  size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  Mat aug(rows, Vec(cols + 1, Rat(0)));
  for (size_t i = 0; i < rows; ++i) {
    std::copy(a[i].begin(), a[i].end(), aug[i].begin());
    aug[i][cols] = b[i];
  }
  std::vector<size_t> piv;
  row_echelon(aug, &piv);
  Vec x(cols, Rat(0));
  size_t r = 0;
  for (; r < piv.size(); ++r) x[piv[r]] = aug[r][cols];
  for (size_t i = piv.size(); i < rows; ++i)
    if (aug[i][cols] != 0) return std::nullopt;
  // Verify (cheap, catches pivot bookkeeping slips).
  for (size_t i = 0; i < rows; ++i)
    if (dot(a[i], x) != b[i]) return std::nullopt;
  return x;
}

// Basis of the right kernel {x : A x = 0}.
inline Mat kernel_basis(Mat a) {
  size_t cols = a.empty() ? 0 : a[0].size();
  std::vector<size_t> piv;
  row_echelon(a, &piv);
  std::vector<bool> is_pivot(cols, false);
  for (size_t c : piv) is_pivot[c] = true;
  Mat basis;
  for (size_t free_c = 0; free_c < cols; ++free_c) {
    if (is_pivot[free_c]) continue;
    Vec v(cols, Rat(0));
    v[free_c] = 1;
    for (size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -a[r][free_c];
    basis.push_back(std::move(v));
  }
  return basis;
}

inline std::optional<Mat> mat_inverse(const Mat& a) {
  size_t n = a.size();
  Mat aug(n, Vec(2 * n, Rat(0)));
  for (size_t i = 0; i < n; ++i) {
    std::copy(a[i].begin(), a[i].end(), aug[i].begin());
    aug[i][n + i] = 1;
  }
  std::vector<size_t> piv;
  row_echelon(aug, &piv);
  if (piv.size() != n) return std::nullopt;
  for (size_t i = 0; i < n; ++i)
    if (piv[i] != i) return std::nullopt;
  Mat inv(n, Vec(n, Rat(0)));
  for (size_t i = 0; i < n; ++i)
    std::copy(aug[i].begin() + n, aug[i].end(), inv[i].begin());
  return inv;
}

inline Rat determinant(Mat m) {
  size_t n = m.size();
  Rat det = 1;
  for (size_t c = 0; c < n; ++c) {
    size_t p = c;
    while (p < n && m[p][c] == 0) ++p;
    if (p == n) return Rat(0);
    if (p != c) { std::swap(m[p], m[c]); det = -det; }
    det *= m[c][c];
    Rat inv = Rat(1) / m[c][c];
    for (size_t i = c + 1; i < n; ++i) {
      if (m[i][c] == 0) continue;
      Rat f = m[i][c] * inv;
      for (size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
    }
  }
  return det;
}

}  // namespace polydisc
