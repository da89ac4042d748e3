#pragma once

#include <cstddef>
#include <optional>

#include "csinst/common.hpp"
#include "csinst/matrix.hpp"

namespace csinst::oracle {

// Result of the exhaustive sparsest-fit search.
struct SparsestFit {
  Vector d;                        // a sparsest solution of F d = y
  std::size_t k = 0;               // its support size
  double residual_inf = 0.0;       // max |F d - y| at the found support
  std::size_t supports_tested = 0;
  std::size_t extra_fits_at_k = 0;  // other supports of size k that also fit
};

// Enumerates supports of size 0..k_max in lexicographic order and solves
// each restricted least-squares problem by pivoted QR, accepting a support
// when the residual is at or below kOracleResidual. Returns the first (and
// sparsest) hit, continuing through the rest of that k to count ties.
// Returns nullopt when nothing fits up to k_max. The total number of
// candidate supports is capped at kOracleBudget (BudgetError beyond it).
std::optional<SparsestFit> l0_oracle(const Matrix& f, const Vector& y,
                                     std::size_t k_max);

// Minimum-norm dual vector w with (F^T w)_i = sign(d_i) on the support of d.
struct Certificate {
  bool exists = false;  // sign pattern is attainable on the support
  bool strict = false;  // exists and max off-support |F^T w| < 1 - kCertMargin
  Vector w;
  double sign_residual = 0.0;    // max |(F^T w)_S - sign(d_S)|
  double off_support_max = 0.0;  // max off-support |(F^T w)_i|
};

// Builds w from a pivoted QR of the support columns. A strict certificate
// implies d is the unique l1 minimizer among solutions of F x = F d; its
// absence implies nothing. Throws RankDeficientError when the support
// columns are linearly dependent, DimensionError on an empty support.
Certificate dual_certificate(const Matrix& f, const Vector& d,
                             double tau = 1e-6);

}  // namespace csinst::oracle
