#pragma once
// Small exact linear algebra over a finite field: Gaussian elimination for
// determinants, rank and kernels. Matrices are dense row-major and tiny
// (at most 7x7 here), so no pivot-selection subtleties apply beyond finding
// any non-zero pivot.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "qhvar/common.hpp"
#include "qhvar/pg.hpp"

namespace qhvar {

struct Mat {
  std::size_t rows = 0, cols = 0;
  std::vector<Fel> a;

  Mat() = default;
  Mat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0) {}

  Fel& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  const Fel& at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

// Row echelon reduction in place; returns the rank. If det is non-null and
// the matrix is square, *det receives the determinant.
template <FieldLike F>
std::size_t row_reduce(const F& field, Mat& m, Fel* det = nullptr) {
  Fel d = 1;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < m.cols && rank < m.rows; ++col) {
    std::size_t pivot = rank;
    while (pivot < m.rows && m.at(pivot, col) == 0) ++pivot;
    if (pivot == m.rows) continue;
    if (pivot != rank) {
      for (std::size_t j = 0; j < m.cols; ++j) std::swap(m.at(pivot, j), m.at(rank, j));
      d = field.neg(d);
    }
    Fel lead = m.at(rank, col);
    d = field.mul(d, lead);
    Fel lead_inv = field.inv(lead);
    for (std::size_t j = col; j < m.cols; ++j) m.at(rank, j) = field.mul(m.at(rank, j), lead_inv);
    for (std::size_t i = 0; i < m.rows; ++i) {
      if (i == rank || m.at(i, col) == 0) continue;
      Fel f = m.at(i, col);
      for (std::size_t j = col; j < m.cols; ++j)
        m.at(i, j) = field.sub(m.at(i, j), field.mul(f, m.at(rank, j)));
    }
    ++rank;
  }
  if (det) *det = (rank == m.rows && m.rows == m.cols) ? d : 0;
  return rank;
}

template <FieldLike F>
Fel determinant(const F& field, Mat m) {
  require(m.rows == m.cols, errc::dimension_mismatch, "determinant of a non-square matrix");
  Fel d = 0;
  row_reduce(field, m, &d);
  return d;
}

template <FieldLike F>
std::size_t rank(const F& field, Mat m) {
  return row_reduce(field, m);
}

// Basis of the right kernel {x : M x = 0}, one vector per row of the result.
template <FieldLike F>
std::vector<std::vector<Fel>> kernel_basis(const F& field, Mat m) {
  std::size_t cols = m.cols;
  std::size_t r = row_reduce(field, m);
  // In reduced echelon form the pivot of row i is its first non-zero entry.
  std::vector<std::size_t> pivot_col;
  std::vector<bool> is_pivot(cols, false);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      if (m.at(i, j) != 0) {
        pivot_col.push_back(j);
        is_pivot[j] = true;
        break;
      }
    }
  }
  std::vector<std::vector<Fel>> basis;
  for (std::size_t free_col = 0; free_col < cols; ++free_col) {
    if (is_pivot[free_col]) continue;
    std::vector<Fel> v(cols, 0);
    v[free_col] = 1;
    for (std::size_t i = 0; i < pivot_col.size(); ++i)
      v[pivot_col[i]] = field.neg(m.at(i, free_col));
    basis.push_back(std::move(v));
  }
  return basis;
}

// Rank of a set of points viewed as vectors.
template <FieldLike F>
std::size_t span_rank(const F& field, const std::vector<Pt>& pts) {
  if (pts.empty()) return 0;
  Mat m(pts.size(), pts[0].n);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < pts[i].n; ++j) m.at(i, j) = pts[i].c[j];
  return row_reduce(field, m);
}

// All normalized projective points of the span of the given (independent or
// not) vectors.
template <FieldLike F>
std::vector<Pt> span_points(const F& field, const std::vector<Pt>& gens) {
  std::vector<Pt> basis;
  for (const Pt& g : gens) {
    std::vector<Pt> trial = basis;
    trial.push_back(g);
    if (span_rank(field, trial) > basis.size()) basis.push_back(g);
  }
  std::vector<Pt> out;
  if (basis.empty()) return out;
  const std::uint32_t q = field.size();
  std::uint64_t combos = 1;
  for (std::size_t i = 0; i < basis.size(); ++i) combos *= q;
  for (std::uint64_t idx = 1; idx < combos; ++idx) {
    Pt acc;
    acc.n = basis[0].n;
    std::uint64_t v = idx;
    for (const Pt& b : basis) {
      Fel coeff = static_cast<Fel>(v % q);
      v /= q;
      if (coeff == 0) continue;
      for (std::size_t i = 0; i < acc.n; ++i)
        acc.c[i] = field.add(acc.c[i], field.mul(coeff, b.c[i]));
    }
    if (lead_index(acc) == acc.n) continue;
    out.push_back(normalize(field, acc));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace qhvar
