#include "csinst/kernels.hpp"

#include <vector>

namespace csinst::kernels {

double dot(const double* a, const double* b, std::size_t n) {
  double lane[8] = {0, 0, 0, 0, 0, 0, 0, 0};
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    lane[0] += a[i + 0] * b[i + 0];
    lane[1] += a[i + 1] * b[i + 1];
    lane[2] += a[i + 2] * b[i + 2];
    lane[3] += a[i + 3] * b[i + 3];
    lane[4] += a[i + 4] * b[i + 4];
    lane[5] += a[i + 5] * b[i + 5];
    lane[6] += a[i + 6] * b[i + 6];
    lane[7] += a[i + 7] * b[i + 7];
  }
  for (; i < n; ++i) lane[i % 8] += a[i] * b[i];
  return ((lane[0] + lane[1]) + (lane[2] + lane[3])) +
         ((lane[4] + lane[5]) + (lane[6] + lane[7]));
}

void hadamard(double* dst, const double* a, const double* w, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = a[i] * w[i];
}

double dot_strided(const double* a, std::size_t stride, const double* b,
                   std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i * stride] * b[i];
  return s;
}

namespace serial {

void matvec(const Matrix& a, const double* x, double* y) {
  for (std::size_t i = 0; i < a.rows; ++i)
    y[i] = kernels::dot(a.row(i), x, a.cols);
}

void matvec_t(const Matrix& a, const double* x, double* y) {
  for (std::size_t j = 0; j < a.cols; ++j)
    y[j] = kernels::dot_strided(a.data.data() + j, a.cols, x, a.rows);
}

void gram_weighted(const Matrix& a, const double* w, Matrix& g) {
  std::vector<double> rw(a.cols);
  for (std::size_t i = 0; i < a.rows; ++i) {
    kernels::hadamard(rw.data(), a.row(i), w, a.cols);
    for (std::size_t j = i; j < a.rows; ++j) {
      double v = kernels::dot(rw.data(), a.row(j), a.cols);
      g(i, j) = v;
      g(j, i) = v;
    }
  }
}

}  // namespace serial

void matvec(const Matrix& a, const double* x, double* y) {
  const std::ptrdiff_t rows = static_cast<std::ptrdiff_t>(a.rows);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < rows; ++i)
    y[i] = kernels::dot(a.row(static_cast<std::size_t>(i)), x, a.cols);
}

void matvec_t(const Matrix& a, const double* x, double* y) {
  const std::ptrdiff_t cols = static_cast<std::ptrdiff_t>(a.cols);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < cols; ++j)
    y[j] = kernels::dot_strided(a.data.data() + j, a.cols, x, a.rows);
}

void gram_weighted(const Matrix& a, const double* w, Matrix& g) {
  const std::ptrdiff_t rows = static_cast<std::ptrdiff_t>(a.rows);
  // Row i of the result costs (rows - i) dots, so hand out rows dynamically
  // to balance the triangle.
#pragma omp parallel
  {
    std::vector<double> rw(a.cols);
#pragma omp for schedule(dynamic)
    for (std::ptrdiff_t ii = 0; ii < rows; ++ii) {
      const std::size_t i = static_cast<std::size_t>(ii);
      kernels::hadamard(rw.data(), a.row(i), w, a.cols);
      for (std::size_t j = i; j < a.rows; ++j) {
        double v = kernels::dot(rw.data(), a.row(j), a.cols);
        g(i, j) = v;
        g(j, i) = v;
      }
    }
  }
}

}  // namespace csinst::kernels
