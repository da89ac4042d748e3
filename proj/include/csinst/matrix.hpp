#pragma once

#include <cstddef>
#include <vector>

#include "csinst/common.hpp"

namespace csinst {

using Vector = std::vector<double>;

// Dense row-major matrix of 64-bit reals.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;  // row-major, rows*cols entries

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  double* row(std::size_t i) { return data.data() + i * cols; }
  const double* row(std::size_t i) const { return data.data() + i * cols; }
};

double l1_norm(const Vector& v);
double l2_norm(const Vector& v);
double linf_norm(const Vector& v);

bool all_finite(const Vector& v);
bool all_finite(const Matrix& m);

// max |A(i,j) - B(i,j)|; matrices must share shape
double max_abs_diff(const Matrix& a, const Matrix& b);

}  // namespace csinst
