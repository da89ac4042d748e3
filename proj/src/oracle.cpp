#include "csinst/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "csinst/basp.hpp"
#include "csinst/kernels.hpp"
#include "csinst/linalg.hpp"
#include "csinst/qr.hpp"

namespace csinst::oracle {

namespace {

Matrix columns(const Matrix& f, const std::vector<std::size_t>& idx) {
  Matrix out(f.rows, idx.size());
  for (std::size_t i = 0; i < f.rows; ++i)
    for (std::size_t t = 0; t < idx.size(); ++t) out(i, t) = f(i, idx[t]);
  return out;
}

// residual of the least-squares fit of y on the given support, with the
// coefficients written into z
double support_residual(const Matrix& f, const Vector& y,
                        const std::vector<std::size_t>& idx, Vector& z) {
  Matrix fs = columns(f, idx);
  HouseholderQr qr(fs, /*pivot=*/true);
  z = qr.solve_least_squares(y);
  double res = 0.0;
  for (std::size_t i = 0; i < f.rows; ++i) {
    double fit = kernels::dot(fs.row(i), z.data(), idx.size());
    res = std::max(res, std::abs(fit - y[i]));
  }
  return res;
}

// lexicographic successor of a size-k index combination over [0, m)
bool next_combination(std::vector<std::size_t>& idx, std::size_t m) {
  std::size_t k = idx.size();
  for (std::size_t t = k; t-- > 0;) {
    if (idx[t] < m - (k - t)) {
      ++idx[t];
      for (std::size_t u = t + 1; u < k; ++u) idx[u] = idx[u - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

std::optional<SparsestFit> l0_oracle(const Matrix& f, const Vector& y,
                                     std::size_t k_max) {
  if (y.size() != f.rows) throw DimensionError("l0_oracle: length mismatch");
  if (k_max > f.cols) k_max = f.cols;

  std::size_t tested = 0;
  auto charge = [&tested] {
    if (static_cast<double>(++tested) > kOracleBudget)
      throw BudgetError("l0_oracle: support budget exhausted");
  };

  charge();
  if (linf_norm(y) <= kOracleResidual) {
    SparsestFit fit;
    fit.d.assign(f.cols, 0.0);
    fit.residual_inf = linf_norm(y);
    fit.supports_tested = tested;
    return fit;
  }

  Vector z;
  for (std::size_t k = 1; k <= k_max; ++k) {
    std::vector<std::size_t> idx(k);
    for (std::size_t t = 0; t < k; ++t) idx[t] = t;
    std::optional<SparsestFit> found;
    do {
      charge();
      double res = support_residual(f, y, idx, z);
      if (res <= kOracleResidual) {
        if (!found) {
          SparsestFit fit;
          fit.d.assign(f.cols, 0.0);
          for (std::size_t t = 0; t < k; ++t) fit.d[idx[t]] = z[t];
          fit.k = k;
          fit.residual_inf = res;
          found = fit;
        } else {
          ++found->extra_fits_at_k;
        }
      }
    } while (next_combination(idx, f.cols));
    if (found) {
      found->supports_tested = tested;
      return found;
    }
  }
  return std::nullopt;
}

Certificate dual_certificate(const Matrix& f, const Vector& d, double tau) {
  std::vector<std::size_t> support = basp::threshold_support(d, tau);
  if (support.empty())
    throw DimensionError("dual_certificate: empty support");
  const std::size_t k = support.size();

  Matrix fs = columns(f, support);
  HouseholderQr qr(fs, /*pivot=*/true);
  if (qr.rank() < k)
    throw RankDeficientError("dual_certificate: support columns have rank " +
                             std::to_string(qr.rank()) + " < " +
                             std::to_string(k));

  // Minimum-norm w with Fs^T w = sign(d_S): w = Q z where R^T z matches the
  // permuted sign pattern, so w lies in the span of the support columns.
  Vector sign_perm(k);
  for (std::size_t j = 0; j < k; ++j) {
    double v = d[support[qr.perm()[j]]];
    sign_perm[j] = v > 0.0 ? 1.0 : -1.0;
  }
  Vector zc = qr.solve_rt(sign_perm, k);
  Vector w(f.rows, 0.0);
  Matrix q = qr.thin_q();
  for (std::size_t i = 0; i < f.rows; ++i)
    w[i] = kernels::dot(q.row(i), zc.data(), k);

  Certificate cert;
  cert.w = w;
  Vector ftw = matvec_transpose(f, w);
  double sr = 0.0;
  for (std::size_t i : support) {
    double target = d[i] > 0.0 ? 1.0 : -1.0;
    sr = std::max(sr, std::abs(ftw[i] - target));
  }
  cert.sign_residual = sr;
  double off = 0.0;
  std::size_t next = 0;
  for (std::size_t i = 0; i < f.cols; ++i) {
    if (next < k && support[next] == i) {
      ++next;
      continue;
    }
    off = std::max(off, std::abs(ftw[i]));
  }
  cert.off_support_max = off;
  cert.exists = sr <= kOracleResidual;
  cert.strict = cert.exists && off < 1.0 - kCertMargin;
  return cert;
}

}  // namespace csinst::oracle
