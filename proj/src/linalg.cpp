#include "csinst/linalg.hpp"

#include <cmath>
#include <string>

#include "csinst/kernels.hpp"
#include "csinst/qr.hpp"
#include "csinst/rng.hpp"

namespace csinst {

Matrix gaussian_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  if (rows < 1 || rows > cols)
    throw DimensionError("gaussian_matrix: need 1 <= rows <= cols, got " +
                         std::to_string(rows) + " x " + std::to_string(cols));
  Matrix m(rows, cols);
  SplitMix64 rng(seed);
  for (double& x : m.data) x = rng.next_normal();
  return m;
}

Matrix orthonormalize_rows(const Matrix& m) {
  Matrix mt(m.cols, m.rows);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) mt(j, i) = m(i, j);
  HouseholderQr qr(mt, /*pivot=*/true);
  if (qr.rank() < m.rows)
    throw RankDeficientError("orthonormalize_rows: row rank " +
                             std::to_string(qr.rank()) + " < " +
                             std::to_string(m.rows));
  Matrix q = qr.thin_q();  // m.cols x m.rows, orthonormal columns
  Matrix out(m.rows, m.cols);
  for (std::size_t i = 0; i < m.rows; ++i) {
    for (std::size_t j = 0; j < m.cols; ++j) out(i, j) = q(j, i);
    // Fix the sign so the basis does not depend on reflector orientation.
    for (std::size_t j = 0; j < m.cols; ++j) {
      if (std::abs(out(i, j)) > 1e-12) {
        if (out(i, j) < 0.0)
          for (std::size_t t = 0; t < m.cols; ++t) out(i, t) = -out(i, t);
        break;
      }
    }
  }
  return out;
}

Vector matvec(const Matrix& m, const Vector& v) {
  if (v.size() != m.cols) throw DimensionError("matvec: length mismatch");
  Vector y(m.rows);
  kernels::matvec(m, v.data(), y.data());
  return y;
}

Vector matvec_transpose(const Matrix& m, const Vector& v) {
  if (v.size() != m.rows)
    throw DimensionError("matvec_transpose: length mismatch");
  Vector y(m.cols);
  kernels::matvec_t(m, v.data(), y.data());
  return y;
}

Vector null_space_sample(const Matrix& f, std::uint64_t seed) {
  SplitMix64 rng(seed);
  for (int attempt = 0; attempt < 16; ++attempt) {
    Vector v(f.cols);
    for (double& x : v) x = rng.next_normal();
    Vector fv = matvec(f, v);
    Vector proj = matvec_transpose(f, fv);
    Vector e(f.cols);
    for (std::size_t i = 0; i < f.cols; ++i) e[i] = v[i] - proj[i];
    Vector fe = matvec(f, e);
    if (linf_norm(fe) <= kNullspaceResidual && l2_norm(e) > 0.0) return e;
  }
  throw DegenerateSampleError(
      "null_space_sample: 16 draws failed the residual check; the rows of F "
      "are likely not orthonormal");
}

}  // namespace csinst
