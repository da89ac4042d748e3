#pragma once

#include <cstddef>

#include "csinst/matrix.hpp"

// Dense inner loops. The OpenMP entry points at namespace level parallelize
// over independent output elements only; every element is accumulated by the
// shared noinline helpers below in a fixed order, so results are bit-identical
// to the serial reference regardless of thread count or schedule.

namespace csinst::kernels {

// 8-lane dot product: element i accumulates into lane i % 8, lanes combine
// pairwise at the end. Fixed association, vectorizable.
[[gnu::noinline]] double dot(const double* a, const double* b, std::size_t n);

// dst[i] = a[i] * w[i]
[[gnu::noinline]] void hadamard(double* dst, const double* a, const double* w,
                                std::size_t n);

// sum_i a[i*stride] * b[i], plain left-to-right accumulation
[[gnu::noinline]] double dot_strided(const double* a, std::size_t stride,
                                     const double* b, std::size_t n);

namespace serial {
// y = A x
void matvec(const Matrix& a, const double* x, double* y);
// y = A^T x
void matvec_t(const Matrix& a, const double* x, double* y);
// g = A diag(w) A^T, symmetric k x k
void gram_weighted(const Matrix& a, const double* w, Matrix& g);
}  // namespace serial

// OpenMP variants; bit-identical to the serial reference.
void matvec(const Matrix& a, const double* x, double* y);
void matvec_t(const Matrix& a, const double* x, double* y);
void gram_weighted(const Matrix& a, const double* w, Matrix& g);

}  // namespace csinst::kernels
