#pragma once

#include <cstddef>
#include <vector>

#include "csinst/common.hpp"
#include "csinst/matrix.hpp"

namespace csinst {

// Householder QR of an m x n matrix with optional column pivoting.
//
// Factors A P = Q R where P is the column permutation (identity when pivoting
// is off). Reflectors are stored below the diagonal of an internal
// column-major workspace with the unit leading coefficient implicit; pivots
// are the |R_jj| in elimination order. With pivoting on, the pivot column is
// the one of largest remaining norm (recomputed exactly each step, ties to the
// lowest index), so pivots are non-increasing and the numerical rank is the
// count of pivots >= rank_tol * pivot_0.
class HouseholderQr {
 public:
  HouseholderQr(const Matrix& a, bool pivot, double rank_tol = kRankPivotTol);

  std::size_t m() const { return m_; }
  std::size_t n() const { return n_; }
  std::size_t steps() const { return steps_; }
  std::size_t rank() const { return rank_; }
  double pivot(std::size_t j) const { return pivots_[j]; }
  double max_pivot() const { return max_pivot_; }
  const std::vector<std::size_t>& perm() const { return perm_; }

  // y := Q^T y (length m)
  void apply_qt(Vector& y) const;
  // y := Q y (length m)
  void apply_q(Vector& y) const;

  // First steps() columns of Q, m x steps(), orthonormal.
  Matrix thin_q() const;

  // Basic least-squares solution of min ||A x - b||_2 using the leading
  // rank() pivot columns; the remaining entries of x are zero.
  Vector solve_least_squares(const Vector& b) const;

  // Back-substitution with the leading r x r block: R z = w.
  Vector solve_r(const Vector& w, std::size_t r) const;
  // Forward substitution with its transpose: R^T z = w.
  Vector solve_rt(const Vector& w, std::size_t r) const;

  // R[0..r-1, t] for a trailing column t >= r: the coefficients of pivot
  // column t in the basis of the leading r pivot columns are solve_r of this.
  Vector r_column(std::size_t t, std::size_t r) const;

 private:
  double* col(std::size_t j) { return f_.data() + j * m_; }
  const double* col(std::size_t j) const { return f_.data() + j * m_; }

  std::size_t m_ = 0, n_ = 0, steps_ = 0, rank_ = 0;
  std::vector<double> f_;     // column-major m x n workspace
  std::vector<double> beta_;  // reflector scalars, one per step
  std::vector<double> pivots_;
  std::vector<std::size_t> perm_;
  double max_pivot_ = 0.0;
};

}  // namespace csinst
