#include "csinst/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "csinst/kernels.hpp"
#include "csinst/qr.hpp"

namespace csinst::lp {

const char* status_name(Status s) {
  switch (s) {
    case Status::optimal: return "optimal";
    case Status::infeasible: return "infeasible";
    case Status::unbounded: return "unbounded";
    case Status::iteration_limit: return "iteration_limit";
    case Status::numerical_breakdown: return "numerical_breakdown";
  }
  return "unknown";
}

void Cholesky::solve(Vector& rhs) const {
  const std::size_t k = l.rows;
  for (std::size_t i = 0; i < k; ++i) {
    double s = rhs[i] - kernels::dot(l.row(i), rhs.data(), i);
    rhs[i] = s / l(i, i);
  }
  for (std::size_t i = k; i-- > 0;) {
    double s = rhs[i] - kernels::dot_strided(l.data.data() + (i + 1) * k + i, k,
                                             rhs.data() + i + 1, k - 1 - i);
    rhs[i] = s / l(i, i);
  }
}

Cholesky cholesky(const Matrix& m) {
  Cholesky out;
  if (m.rows != m.cols) throw DimensionError("cholesky: matrix not square");
  const std::size_t k = m.rows;
  out.l = Matrix(k, k);
  for (std::size_t j = 0; j < k; ++j) {
    double d = m(j, j) - kernels::dot(out.l.row(j), out.l.row(j), j);
    if (!(d > 0.0) || !std::isfinite(d)) return out;  // ok stays false
    double root = std::sqrt(d);
    out.l(j, j) = root;
    for (std::size_t i = j + 1; i < k; ++i)
      out.l(i, j) =
          (m(i, j) - kernels::dot(out.l.row(i), out.l.row(j), j)) / root;
  }
  out.ok = true;
  return out;
}

namespace {

// Cholesky with an escalating diagonal ridge; interior-point normal matrices
// go singular near convergence and a small shift keeps the factor usable.
Cholesky factor_with_ridge(const Matrix& m) {
  Cholesky f = cholesky(m);
  if (f.ok) return f;
  double max_diag = 0.0;
  for (std::size_t i = 0; i < m.rows; ++i)
    max_diag = std::max(max_diag, std::abs(m(i, i)));
  if (!(max_diag > 0.0)) return f;
  double lam = 1e-14 * max_diag;
  for (int t = 0; t < 13 && lam <= 0.1 * max_diag; ++t, lam *= 10.0) {
    Matrix shifted = m;
    for (std::size_t i = 0; i < m.rows; ++i) shifted(i, i) += lam;
    f = cholesky(shifted);
    if (f.ok) return f;
  }
  return f;
}

Matrix select_rows(const Matrix& a, const std::vector<std::size_t>& idx) {
  Matrix out(idx.size(), a.cols);
  for (std::size_t t = 0; t < idx.size(); ++t)
    for (std::size_t j = 0; j < a.cols; ++j) out(t, j) = a(idx[t], j);
  return out;
}

Vector select(const Vector& v, const std::vector<std::size_t>& idx) {
  Vector out(idx.size());
  for (std::size_t t = 0; t < idx.size(); ++t) out[t] = v[idx[t]];
  return out;
}

// largest alpha in [0, +inf) keeping v + alpha * dv >= 0
double step_limit(const Vector& v, const Vector& dv) {
  double lim = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v.size(); ++i)
    if (dv[i] < 0.0) lim = std::min(lim, -v[i] / dv[i]);
  return lim;
}

}  // namespace

Presolved presolve(const Matrix& a, double pivot_tol) {
  if (a.rows == 0 || a.cols == 0) throw DimensionError("presolve: empty matrix");
  Matrix at(a.cols, a.rows);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) at(j, i) = a(i, j);
  HouseholderQr qr(at, /*pivot=*/true, pivot_tol);
  const std::size_t r = qr.rank();
  const auto& perm = qr.perm();

  Presolved pre;
  pre.kept.assign(perm.begin(), perm.begin() + r);
  pre.dropped.assign(perm.begin() + r, perm.end());
  std::sort(pre.kept.begin(), pre.kept.end());
  std::sort(pre.dropped.begin(), pre.dropped.end());

  std::vector<std::size_t> kept_pos(a.rows, 0), drop_pos(a.rows, 0);
  for (std::size_t j = 0; j < pre.kept.size(); ++j) kept_pos[pre.kept[j]] = j;
  for (std::size_t j = 0; j < pre.dropped.size(); ++j)
    drop_pos[pre.dropped[j]] = j;

  pre.drop_coeffs = Matrix(pre.dropped.size(), pre.kept.size());
  for (std::size_t t = r; t < a.rows; ++t) {
    Vector lam = qr.solve_r(qr.r_column(t, r), r);
    std::size_t row = drop_pos[perm[t]];
    for (std::size_t j = 0; j < r; ++j)
      pre.drop_coeffs(row, kept_pos[perm[j]]) = lam[j];
  }

  if (r > 0) {
    Matrix ak = select_rows(a, pre.kept);
    Vector ones(a.cols, 1.0);
    Matrix g(r, r);
    kernels::gram_weighted(ak, ones.data(), g);
    pre.aat = factor_with_ridge(g);
  }
  return pre;
}

Solution solve_lp(const StandardFormLP& lp, double feas_tol, double gap_tol,
                  std::size_t max_iter) {
  return solve_lp(lp, presolve(lp.a), feas_tol, gap_tol, max_iter);
}

Solution solve_lp(const StandardFormLP& lp, const Presolved& pre,
                  double feas_tol, double gap_tol, std::size_t max_iter) {
  const Matrix& a = lp.a;
  const Vector& b = lp.b;
  const Vector& c = lp.c;
  if (a.rows != b.size() || a.cols != c.size())
    throw DimensionError("solve_lp: shape mismatch");
  if (!(feas_tol > 0.0) || feas_tol > 1e-2 || !(gap_tol > 0.0) ||
      gap_tol > 1e-2)
    throw DimensionError("solve_lp: tolerances must lie in (0, 1e-2]");
  if (max_iter == 0) throw DimensionError("solve_lp: max_iter must be >= 1");

  const std::size_t n = a.cols;
  Solution sol;
  if (!all_finite(a) || !all_finite(b) || !all_finite(c)) {
    sol.note = "non-finite input";
    return sol;
  }

  const double bnorm_full = linf_norm(b);
  const double cnorm = linf_norm(c);

  // Dropped rows must agree with the combination of kept rows they equal.
  for (std::size_t t = 0; t < pre.dropped.size(); ++t) {
    double pred = 0.0;
    for (std::size_t j = 0; j < pre.kept.size(); ++j)
      pred += pre.drop_coeffs(t, j) * b[pre.kept[j]];
    if (std::abs(b[pre.dropped[t]] - pred) > feas_tol * (1.0 + bnorm_full)) {
      sol.status = Status::infeasible;
      sol.note = "row " + std::to_string(pre.dropped[t]) +
                 " is dependent but its right-hand side is inconsistent";
      return sol;
    }
  }

  const std::size_t k = pre.kept.size();
  if (k == 0) {
    // No effective constraints beyond x >= 0 (b was consistent above).
    bool neg = false;
    std::size_t neg_i = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (c[i] < 0.0) {
        neg = true;
        neg_i = i;
        break;
      }
    if (neg) {
      sol.status = Status::unbounded;
      sol.note = "free coordinate " + std::to_string(neg_i) +
                 " has negative cost";
      return sol;
    }
    sol.status = Status::optimal;
    sol.x.assign(n, 0.0);
    sol.dual.assign(a.rows, 0.0);
    sol.objective = 0.0;
    sol.primal_residual = bnorm_full / (1.0 + bnorm_full);
    return sol;
  }

  Matrix ak = select_rows(a, pre.kept);
  Vector bk = select(b, pre.kept);
  const double bnorm = linf_norm(bk);

  Cholesky aat = pre.aat;
  if (!aat.ok) {
    Matrix g(k, k);
    Vector ones(n, 1.0);
    kernels::gram_weighted(ak, ones.data(), g);
    aat = factor_with_ridge(g);
    if (!aat.ok) {
      sol.note = "A A^T is not positive definite after presolve";
      return sol;
    }
  }

  // Starting point: least-norm primal and least-squares dual, shifted into
  // the positive orthant.
  Vector x(n), y(k), s(n);
  {
    Vector z = bk;
    aat.solve(z);
    kernels::matvec_t(ak, z.data(), x.data());  // x = A^T (A A^T)^{-1} b
    Vector w(k);
    kernels::matvec(ak, c.data(), w.data());
    aat.solve(w);
    y = w;                                       // y = (A A^T)^{-1} A c
    Vector aty(n);
    kernels::matvec_t(ak, y.data(), aty.data());
    for (std::size_t i = 0; i < n; ++i) s[i] = c[i] - aty[i];

    double min_x = *std::min_element(x.begin(), x.end());
    double min_s = *std::min_element(s.begin(), s.end());
    double dx = std::max(-1.5 * min_x, 0.0);
    double ds = std::max(-1.5 * min_s, 0.0);
    for (double& v : x) v += dx;
    for (double& v : s) v += ds;
    double xs = kernels::dot(x.data(), s.data(), n);
    double sum_x = std::accumulate(x.begin(), x.end(), 0.0);
    double sum_s = std::accumulate(s.begin(), s.end(), 0.0);
    double dhx = 1.0, dhs = 1.0;
    if (xs > 0.0 && sum_x > 0.0 && sum_s > 0.0) {
      dhx = 0.5 * xs / sum_s;
      dhs = 0.5 * xs / sum_x;
    }
    for (double& v : x) v += dhx;
    for (double& v : s) v += dhs;
  }

  Vector rp(k), rd(n), w(n), drd(n), dy(k), ds(n), dx(n), dy_a(k), ds_a(n),
      dx_a(n), v(n), tmp_k(k), tmp_n(n), rhs0_r(k), res_r(k), res2_r(k),
      corr_r(k), trial_r(k);
  Matrix m(k, k);
  int stalls = 0;

  auto finish_optimal = [&](double cx, std::size_t iters) {
    sol.status = Status::optimal;
    sol.x = x;
    sol.dual.assign(a.rows, 0.0);
    for (std::size_t j = 0; j < k; ++j) sol.dual[pre.kept[j]] = y[j];
    sol.objective = cx;
    sol.iterations = iters;
    Vector ax(a.rows);
    kernels::matvec(a, x.data(), ax.data());
    double rp_full = 0.0;
    for (std::size_t i = 0; i < a.rows; ++i)
      rp_full = std::max(rp_full, std::abs(ax[i] - b[i]));
    sol.primal_residual = rp_full / (1.0 + bnorm_full);
    Vector aty(n);
    kernels::matvec_t(a, sol.dual.data(), aty.data());
    double rd_full = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      rd_full = std::max(rd_full, std::abs(c[i] - aty[i] - s[i]));
    sol.dual_residual = rd_full / (1.0 + cnorm);
    double by_full = kernels::dot(b.data(), sol.dual.data(), a.rows);
    sol.duality_gap = std::abs(cx - by_full) / (1.0 + std::abs(cx));
  };

  for (std::size_t iter = 0;; ++iter) {
    kernels::matvec(ak, x.data(), tmp_k.data());
    for (std::size_t i = 0; i < k; ++i) rp[i] = bk[i] - tmp_k[i];
    kernels::matvec_t(ak, y.data(), tmp_n.data());
    for (std::size_t i = 0; i < n; ++i) rd[i] = c[i] - tmp_n[i] - s[i];
    double mu = kernels::dot(x.data(), s.data(), n) / static_cast<double>(n);
    double cx = kernels::dot(c.data(), x.data(), n);
    double by = kernels::dot(bk.data(), y.data(), k);
    double rel_p = linf_norm(rp) / (1.0 + bnorm);
    double rel_d = linf_norm(rd) / (1.0 + cnorm);
    double rel_g = std::abs(cx - by) / (1.0 + std::abs(cx));

    if (!std::isfinite(mu) || !std::isfinite(cx) || !std::isfinite(by) ||
        !std::isfinite(rel_p) || !std::isfinite(rel_d)) {
      sol.status = Status::numerical_breakdown;
      sol.iterations = iter;
      sol.note = "iterates left the finite range";
      return sol;
    }

    if (rel_p <= feas_tol && rel_d <= feas_tol && rel_g <= gap_tol) {
      finish_optimal(cx, iter);
      return sol;
    }
    if (iter >= max_iter) {
      sol.status = Status::iteration_limit;
      sol.objective = cx;
      sol.iterations = iter;
      sol.primal_residual = rel_p;
      sol.dual_residual = rel_d;
      sol.duality_gap = rel_g;
      sol.note = "max_iter reached before convergence";
      return sol;
    }
    // A dual ray with by -> +inf certifies primal infeasibility; a primal
    // ray with cx -> -inf certifies unboundedness. Heuristic thresholds.
    if (by > 1e8 * (1.0 + bnorm) && rel_d <= 1e-4) {
      sol.status = Status::infeasible;
      sol.iterations = iter;
      sol.note = "dual objective diverging with near-feasible dual";
      return sol;
    }
    if (cx < -1e8 * (1.0 + cnorm) && rel_p <= 1e-4) {
      sol.status = Status::unbounded;
      sol.iterations = iter;
      sol.note = "primal objective diverging with near-feasible primal";
      return sol;
    }

    for (std::size_t i = 0; i < n; ++i) w[i] = x[i] / s[i];
    kernels::gram_weighted(ak, w.data(), m);
    Cholesky fact = factor_with_ridge(m);
    if (!fact.ok) {
      sol.status = Status::numerical_breakdown;
      sol.iterations = iter;
      sol.note = "normal equations lost positive definiteness";
      return sol;
    }

    // Near convergence the normal matrix is ill-conditioned (and occasionally
    // ridge-shifted), so a single triangular solve loses digits the outer
    // residuals cannot afford; the resulting steps get clipped and the
    // iteration crawls. Refine each solve against the unshifted matrix,
    // keeping corrections only while they shrink the residual.
    auto solve_refined = [&](Vector& rhs) {
      rhs0_r = rhs;
      fact.solve(rhs);
      kernels::matvec(m, rhs.data(), res_r.data());
      for (std::size_t i = 0; i < k; ++i) res_r[i] = rhs0_r[i] - res_r[i];
      double rn = linf_norm(res_r);
      for (int round = 0; round < 3 && rn > 0.0 && std::isfinite(rn); ++round) {
        corr_r = res_r;
        fact.solve(corr_r);
        for (std::size_t i = 0; i < k; ++i) trial_r[i] = rhs[i] + corr_r[i];
        kernels::matvec(m, trial_r.data(), res2_r.data());
        for (std::size_t i = 0; i < k; ++i) res2_r[i] = rhs0_r[i] - res2_r[i];
        double rn2 = linf_norm(res2_r);
        if (!(rn2 < rn)) break;
        rhs = trial_r;
        res_r = res2_r;
        rn = rn2;
      }
    };

    // Affine scaling direction. Eliminating ds and dx from the Newton
    // system leaves A D A^T dy = b + A D rd with D = diag(x/s).
    kernels::hadamard(drd.data(), w.data(), rd.data(), n);
    kernels::matvec(ak, drd.data(), tmp_k.data());
    for (std::size_t i = 0; i < k; ++i) dy_a[i] = bk[i] + tmp_k[i];
    solve_refined(dy_a);
    kernels::matvec_t(ak, dy_a.data(), tmp_n.data());
    for (std::size_t i = 0; i < n; ++i) ds_a[i] = rd[i] - tmp_n[i];
    for (std::size_t i = 0; i < n; ++i) dx_a[i] = -x[i] - w[i] * ds_a[i];

    double ap_a = std::min(1.0, step_limit(x, dx_a));
    double ad_a = std::min(1.0, step_limit(s, ds_a));
    double mu_aff = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      mu_aff += (x[i] + ap_a * dx_a[i]) * (s[i] + ad_a * ds_a[i]);
    mu_aff /= static_cast<double>(n);
    double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);

    // Corrector: recenter toward sigma*mu and cancel the affine product.
    for (std::size_t i = 0; i < n; ++i)
      v[i] = (-x[i] * s[i] - dx_a[i] * ds_a[i] + sigma * mu) / s[i];
    Vector av(k);
    kernels::matvec(ak, v.data(), av.data());
    for (std::size_t i = 0; i < k; ++i) dy[i] = rp[i] - av[i] + tmp_k[i];
    solve_refined(dy);
    kernels::matvec_t(ak, dy.data(), tmp_n.data());
    for (std::size_t i = 0; i < n; ++i) ds[i] = rd[i] - tmp_n[i];
    for (std::size_t i = 0; i < n; ++i) dx[i] = v[i] - w[i] * ds[i];

    double ap = std::min(1.0, 0.9995 * step_limit(x, dx));
    double ad = std::min(1.0, 0.9995 * step_limit(s, ds));
    if (ap < 1e-10 && ad < 1e-10) {
      if (++stalls >= 3) {
        sol.status = Status::numerical_breakdown;
        sol.iterations = iter;
        sol.note = "step sizes collapsed";
        return sol;
      }
    } else {
      stalls = 0;
    }
    for (std::size_t i = 0; i < n; ++i) x[i] += ap * dx[i];
    for (std::size_t i = 0; i < k; ++i) y[i] += ad * dy[i];
    for (std::size_t i = 0; i < n; ++i) s[i] += ad * ds[i];
  }
}

}  // namespace csinst::lp
