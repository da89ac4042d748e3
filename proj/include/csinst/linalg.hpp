#pragma once

#include <cstdint>

#include "csinst/matrix.hpp"

namespace csinst {

// rows x cols matrix of i.i.d. standard normals, filled row-major from a
// SplitMix64 stream seeded by `seed`. Requires 1 <= rows <= cols.
Matrix gaussian_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed);

// Orthonormal basis of the row space of M, computed by Householder QR of
// M^T. Same shape as M; rows satisfy max |Q Q^T - I| <= 1e-10. The first
// entry of each row with magnitude above 1e-12 is made positive. Throws
// RankDeficientError when the numerical rank is below M.rows.
Matrix orthonormalize_rows(const Matrix& m);

// Standard matrix-vector product.
Vector matvec(const Matrix& m, const Vector& v);
// m^T v
Vector matvec_transpose(const Matrix& m, const Vector& v);

// Projection of a fresh Gaussian vector onto the null space of F:
// e = v - F^T (F v), valid because F has orthonormal rows. Guarantees
// ||F e||inf <= 1e-9 and ||e||_2 > 0; resamples up to 16 times before
// throwing DegenerateSampleError.
Vector null_space_sample(const Matrix& f, std::uint64_t seed);

}  // namespace csinst
