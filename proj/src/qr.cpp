#include "csinst/qr.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "csinst/kernels.hpp"

namespace csinst {

HouseholderQr::HouseholderQr(const Matrix& a, bool pivot, double rank_tol) {
  if (a.rows == 0 || a.cols == 0)
    throw DimensionError("HouseholderQr: empty matrix");
  m_ = a.rows;
  n_ = a.cols;
  steps_ = std::min(m_, n_);
  f_.resize(m_ * n_);
  for (std::size_t j = 0; j < n_; ++j)
    for (std::size_t i = 0; i < m_; ++i) f_[j * m_ + i] = a(i, j);
  beta_.assign(steps_, 0.0);
  pivots_.assign(steps_, 0.0);
  perm_.resize(n_);
  std::iota(perm_.begin(), perm_.end(), 0);

  for (std::size_t k = 0; k < steps_; ++k) {
    if (pivot) {
      // Exact trailing-norm recomputation every step; downdating recurrences
      // drift and would make the pivot order input-sensitive.
      std::size_t best = k;
      double best_norm2 = -1.0;
      for (std::size_t j = k; j < n_; ++j) {
        const double* cj = col(j) + k;
        double n2 = kernels::dot(cj, cj, m_ - k);
        if (n2 > best_norm2) {
          best_norm2 = n2;
          best = j;
        }
      }
      if (best != k) {
        double* ck = col(k);
        double* cb = col(best);
        for (std::size_t i = 0; i < m_; ++i) std::swap(ck[i], cb[i]);
        std::swap(perm_[k], perm_[best]);
      }
    }
    double* ck = col(k);
    double norm = std::sqrt(kernels::dot(ck + k, ck + k, m_ - k));
    pivots_[k] = norm;
    if (norm == 0.0) continue;  // zero column, identity reflector
    double x0 = ck[k];
    double alpha = (x0 >= 0.0) ? -norm : norm;  // avoids cancellation in v0
    double v0 = x0 - alpha;
    beta_[k] = -v0 / alpha;
    double inv_v0 = 1.0 / v0;
    for (std::size_t i = k + 1; i < m_; ++i) ck[i] *= inv_v0;
    ck[k] = alpha;
    for (std::size_t j = k + 1; j < n_; ++j) {
      double* cj = col(j);
      double w = beta_[k] *
                 (cj[k] + kernels::dot(ck + k + 1, cj + k + 1, m_ - k - 1));
      cj[k] -= w;
      for (std::size_t i = k + 1; i < m_; ++i) cj[i] -= w * ck[i];
    }
  }

  max_pivot_ = 0.0;
  for (double p : pivots_) max_pivot_ = std::max(max_pivot_, p);
  rank_ = 0;
  if (max_pivot_ > 0.0) {
    if (pivot) {
      while (rank_ < steps_ && pivots_[rank_] >= rank_tol * max_pivot_)
        ++rank_;
    } else {
      for (std::size_t k = 0; k < steps_; ++k)
        if (pivots_[k] >= rank_tol * max_pivot_) ++rank_;
    }
  }
}

void HouseholderQr::apply_qt(Vector& y) const {
  if (y.size() != m_) throw DimensionError("apply_qt: length mismatch");
  for (std::size_t k = 0; k < steps_; ++k) {
    if (beta_[k] == 0.0) continue;
    const double* ck = col(k);
    double w = beta_[k] *
               (y[k] + kernels::dot(ck + k + 1, y.data() + k + 1, m_ - k - 1));
    y[k] -= w;
    for (std::size_t i = k + 1; i < m_; ++i) y[i] -= w * ck[i];
  }
}

void HouseholderQr::apply_q(Vector& y) const {
  if (y.size() != m_) throw DimensionError("apply_q: length mismatch");
  for (std::size_t k = steps_; k-- > 0;) {
    if (beta_[k] == 0.0) continue;
    const double* ck = col(k);
    double w = beta_[k] *
               (y[k] + kernels::dot(ck + k + 1, y.data() + k + 1, m_ - k - 1));
    y[k] -= w;
    for (std::size_t i = k + 1; i < m_; ++i) y[i] -= w * ck[i];
  }
}

Matrix HouseholderQr::thin_q() const {
  Matrix q(m_, steps_);
  Vector y(m_);
  for (std::size_t t = 0; t < steps_; ++t) {
    std::fill(y.begin(), y.end(), 0.0);
    y[t] = 1.0;
    apply_q(y);
    for (std::size_t i = 0; i < m_; ++i) q(i, t) = y[i];
  }
  return q;
}

Vector HouseholderQr::solve_least_squares(const Vector& b) const {
  if (b.size() != m_) throw DimensionError("solve_least_squares: length mismatch");
  Vector y = b;
  apply_qt(y);
  Vector z = solve_r(y, rank_);
  Vector x(n_, 0.0);
  for (std::size_t j = 0; j < rank_; ++j) x[perm_[j]] = z[j];
  return x;
}

Vector HouseholderQr::solve_r(const Vector& w, std::size_t r) const {
  if (r > steps_ || w.size() < r) throw DimensionError("solve_r: bad size");
  Vector z(r, 0.0);
  for (std::size_t i = r; i-- > 0;) {
    double s = w[i];
    for (std::size_t j = i + 1; j < r; ++j) s -= f_[j * m_ + i] * z[j];
    double d = f_[i * m_ + i];
    if (d == 0.0) throw RankDeficientError("solve_r: zero diagonal");
    z[i] = s / d;
  }
  return z;
}

Vector HouseholderQr::solve_rt(const Vector& w, std::size_t r) const {
  if (r > steps_ || w.size() < r) throw DimensionError("solve_rt: bad size");
  Vector z(r, 0.0);
  for (std::size_t i = 0; i < r; ++i) {
    double s = w[i];
    for (std::size_t j = 0; j < i; ++j) s -= f_[i * m_ + j] * z[j];
    double d = f_[i * m_ + i];
    if (d == 0.0) throw RankDeficientError("solve_rt: zero diagonal");
    z[i] = s / d;
  }
  return z;
}

Vector HouseholderQr::r_column(std::size_t t, std::size_t r) const {
  if (t >= n_ || r > steps_) throw DimensionError("r_column: bad index");
  Vector out(r);
  for (std::size_t i = 0; i < r; ++i) out[i] = f_[t * m_ + i];
  return out;
}

}  // namespace csinst
