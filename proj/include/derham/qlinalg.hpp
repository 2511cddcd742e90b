// Dense exact linear algebra over Q: rank, nullspace and linear solve.
// Every dimension count in the library bottoms out here.
//
// All computations use full rational elimination with eager normalization.
// Pivot columns are chosen by largest support to keep the echelon passes
// predictable; correctness does not depend on the pivot choice.

#ifndef DERHAM_QLINALG_HPP
#define DERHAM_QLINALG_HPP

#include <cassert>
#include <cstddef>
#include <optional>
#include <vector>

#include "derham/errors.hpp"
#include "derham/rational.hpp"

namespace derham {

using QVector = std::vector<Rational>;

class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols, Rational(0)) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(i, c), (*this)(j, c));
  }

  QMatrix transposed() const {
    QMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  void append_row(const QVector& r) {
    assert(cols_ == 0 || r.size() == cols_);
    if (cols_ == 0) cols_ = r.size();
    a_.insert(a_.end(), r.begin(), r.end());
    ++rows_;
  }

  bool operator==(const QMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Rational> a_;
};

namespace detail {

// Row echelon reduction in place. Returns the pivot column of each pivot row.
// Column order: among the not-yet-pivoted columns, the one with the most
// nonzero entries below the current row goes first. Columns at or beyond
// `pivot_limit` are reduced but never pivoted (used for augmented systems).
inline std::vector<std::size_t> echelonize(QMatrix& m, std::size_t pivot_limit = SIZE_MAX) {
  const std::size_t nr = m.rows(), nc = m.cols();
  const std::size_t plim = pivot_limit < nc ? pivot_limit : nc;
  std::vector<bool> used(nc, false);
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  while (row < nr) {
    std::size_t best_col = nc;
    std::size_t best_support = 0;
    for (std::size_t c = 0; c < plim; ++c) {
      if (used[c]) continue;
      std::size_t support = 0;
      for (std::size_t r = row; r < nr; ++r)
        if (!is_zero(m(r, c))) ++support;
      if (support > best_support) {
        best_support = support;
        best_col = c;
      }
    }
    if (best_col == nc) break;  // all remaining columns are zero below `row`
    std::size_t prow = row;
    while (is_zero(m(prow, best_col))) ++prow;
    m.swap_rows(row, prow);
    const Rational pivot = m(row, best_col);
    for (std::size_t c = 0; c < nc; ++c)
      if (!is_zero(m(row, c))) m(row, c) /= pivot;
    for (std::size_t r = 0; r < nr; ++r) {
      if (r == row || is_zero(m(r, best_col))) continue;
      const Rational factor = m(r, best_col);
      for (std::size_t c = 0; c < nc; ++c)
        if (!is_zero(m(row, c))) m(r, c) -= factor * m(row, c);
    }
    used[best_col] = true;
    pivots.push_back(best_col);
    ++row;
  }
  return pivots;
}

}  // namespace detail

inline std::size_t mat_rank(QMatrix m) { return detail::echelonize(m).size(); }

// Basis of Ker(m); size = cols - rank. Every returned column v has m*v = 0.
inline std::vector<QVector> mat_nullspace(QMatrix m) {
  const std::size_t nc = m.cols();
  std::vector<std::size_t> pivots = detail::echelonize(m);
  std::vector<bool> is_pivot(nc, false);
  for (std::size_t p : pivots) is_pivot[p] = true;

  std::vector<QVector> basis;
  for (std::size_t free_col = 0; free_col < nc; ++free_col) {
    if (is_pivot[free_col]) continue;
    QVector v(nc, Rational(0));
    v[free_col] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r)
      v[pivots[r]] = -m(r, free_col);
    basis.push_back(std::move(v));
  }
  return basis;
}

struct SolveResult {
  QVector particular;           // one exact solution
  std::size_t nullity = 0;      // 0 -> the solution is unique
};

// Solves m*x = b. Throws Inconsistent when no solution exists; an
// underdetermined system is flagged through `nullity` alongside one
// particular solution.
inline SolveResult solve_linear(const QMatrix& m, const QVector& b) {
  assert(b.size() == m.rows());
  QMatrix aug(m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = b[i];
  }
  // RHS column rides along but is never pivoted.
  std::vector<std::size_t> pivots = detail::echelonize(aug, m.cols());
  for (std::size_t r = pivots.size(); r < m.rows(); ++r)
    if (!is_zero(aug(r, m.cols()))) throw Inconsistent("solve_linear: inconsistent system");

  QVector x(m.cols(), Rational(0));
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug(r, m.cols());
  return SolveResult{std::move(x), m.cols() - pivots.size()};
}

inline QVector mat_apply(const QMatrix& m, const QVector& x) {
  assert(x.size() == m.cols());
  QVector y(m.rows(), Rational(0));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!is_zero(m(i, j)) && !is_zero(x[j])) y[i] += m(i, j) * x[j];
  return y;
}

}  // namespace derham

#endif
