#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "csinst/common.hpp"
#include "csinst/matrix.hpp"

namespace csinst::lp {

// min c'x  s.t.  A x = b,  x >= 0
struct StandardFormLP {
  Vector c;
  Matrix a;
  Vector b;
};

enum class Status {
  optimal,
  infeasible,
  unbounded,
  iteration_limit,
  numerical_breakdown,
};

const char* status_name(Status s);

struct Solution {
  Status status = Status::numerical_breakdown;
  Vector x;     // primal point, present iff optimal
  Vector dual;  // y, one entry per original row, present iff optimal
  double objective = 0.0;
  std::size_t iterations = 0;
  double primal_residual = 0.0;  // ||Ax - b||inf / (1 + ||b||inf)
  double dual_residual = 0.0;    // ||c - A'y - s||inf / (1 + ||c||inf)
  double duality_gap = 0.0;      // |c'x - b'y| / (1 + |c'x|)
  std::string note;              // reason for a non-optimal status
};

// Lower-triangular Cholesky factor of an SPD matrix.
struct Cholesky {
  Matrix l;
  bool ok = false;

  // in-place solve of L L^T x = rhs
  void solve(Vector& rhs) const;
};

Cholesky cholesky(const Matrix& m);

// Row-independence analysis of A, reusable across solves that share A.
// Dependent rows are found by column-pivoted QR of A^T; a row is dropped when
// its pivot falls below pivot_tol times the largest pivot. For each dropped
// row the coefficients expressing it in the kept rows are recorded so b can
// be checked for consistency per solve.
struct Presolved {
  std::vector<std::size_t> kept;     // ascending original row indices
  std::vector<std::size_t> dropped;  // ascending
  Matrix drop_coeffs;                // dropped.size() x kept.size()
  Cholesky aat;                      // factor of A_kept A_kept^T
};

Presolved presolve(const Matrix& a, double pivot_tol = kRankPivotTol);

// Mehrotra predictor-corrector interior-point solve. Deterministic: identical
// input bits give identical solution bits. Tolerances must lie in (0, 1e-2].
Solution solve_lp(const StandardFormLP& lp, double feas_tol = 1e-8,
                  double gap_tol = 1e-8, std::size_t max_iter = 200);

// Same, reusing a presolve of lp.a (it must have been computed from it).
Solution solve_lp(const StandardFormLP& lp, const Presolved& pre,
                  double feas_tol = 1e-8, double gap_tol = 1e-8,
                  std::size_t max_iter = 200);

}  // namespace csinst::lp
