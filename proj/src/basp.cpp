#include "csinst/basp.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "csinst/kernels.hpp"
#include "csinst/linalg.hpp"

namespace csinst::basp {

const char* verdict_name(Verdict v) {
  return v == Verdict::success ? "success" : "failure";
}

lp::StandardFormLP encode(const Matrix& f, const Vector& y_tilde) {
  if (y_tilde.size() != f.rows) throw DimensionError("encode: length mismatch");
  lp::StandardFormLP out;
  out.c.assign(2 * f.cols, 1.0);
  out.a = Matrix(f.rows, 2 * f.cols);
  for (std::size_t i = 0; i < f.rows; ++i)
    for (std::size_t j = 0; j < f.cols; ++j) {
      out.a(i, j) = f(i, j);
      out.a(i, j + f.cols) = -f(i, j);
    }
  out.b = y_tilde;
  return out;
}

namespace {

// On a degenerate optimal face the interior-point x error scales like
// sqrt(duality gap), which at the default 1e-8 stop can reach ~1e-4 and
// straddle eps_fail. A deviation inside (kAmbiguousLow, kAmbiguousHigh] is
// therefore adjudicated from a second solve at the kRefineTol stop, where
// that slop sits well below the verdict threshold. Deviations outside the
// band are decided by the first solve alone.
constexpr double kAmbiguousLow = 1e-8;
constexpr double kAmbiguousHigh = 1e-3;
constexpr double kRefineTol = 1e-12;

Result from_solution(const Matrix& f, const Vector& e, const Vector& b,
                     const lp::Solution& sol, double eps_fail) {
  const std::size_t m = f.cols;
  Result r;
  r.d.resize(m);
  for (std::size_t i = 0; i < m; ++i) r.d[i] = sol.x[i] - sol.x[i + m];
  r.l1_norm = l1_norm(r.d);
  r.deviation = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    r.deviation = std::max(r.deviation, std::abs(r.d[i] - e[i]));
  Vector fd = matvec(f, r.d);
  double res = 0.0;
  for (std::size_t i = 0; i < f.rows; ++i)
    res = std::max(res, std::abs(fd[i] - b[i]));
  r.measurement_residual = res / (1.0 + linf_norm(b));
  r.verdict = r.deviation <= eps_fail ? Verdict::success : Verdict::failure;
  r.lp_status = sol.status;
  r.lp_iterations = sol.iterations;
  r.lp_gap = sol.duality_gap;
  return r;
}

Result decode_with(const Matrix& f, const Matrix& a, const lp::Presolved* pre,
                   const Vector& e, const Tolerances& tol) {
  if (e.size() != f.cols) throw DimensionError("decode: length mismatch");
  lp::StandardFormLP prob;
  prob.c.assign(2 * f.cols, 1.0);
  prob.a = a;
  prob.b = matvec(f, e);

  auto solve = [&](double feas, double gap) {
    return pre ? lp::solve_lp(prob, *pre, feas, gap, tol.max_iter)
               : lp::solve_lp(prob, feas, gap, tol.max_iter);
  };

  lp::Solution sol = solve(tol.feas_tol, tol.gap_tol);
  if (sol.status != lp::Status::optimal)
    throw DecodeError(std::string("decode: LP ended ") +
                      lp::status_name(sol.status) +
                      (sol.note.empty() ? "" : " (" + sol.note + ")"));

  Result r = from_solution(f, e, prob.b, sol, tol.eps_fail);
  if (r.deviation > kAmbiguousLow && r.deviation <= kAmbiguousHigh) {
    lp::Solution tight = solve(std::min(tol.feas_tol, kRefineTol),
                               std::min(tol.gap_tol, kRefineTol));
    // A tight solve that breaks down leaves the first answer in place.
    if (tight.status == lp::Status::optimal)
      r = from_solution(f, e, prob.b, tight, tol.eps_fail);
  }
  return r;
}

}  // namespace

Result decode(const Matrix& f, const Vector& e, double eps_fail) {
  Tolerances tol;
  tol.eps_fail = eps_fail;
  lp::StandardFormLP prob = encode(f, matvec(f, e));
  return decode_with(f, prob.a, nullptr, e, tol);
}

std::vector<std::size_t> threshold_support(const Vector& v, double tau) {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (std::abs(v[i]) > tau) s.push_back(i);
  return s;
}

std::size_t l0_norm(const Vector& v, double tau) {
  std::size_t n = 0;
  for (double x : v)
    if (std::abs(x) > tau) ++n;
  return n;
}

Decoder::Decoder(Matrix f, Tolerances tol) : f_(std::move(f)), tol_(tol) {
  if (f_.rows == 0 || f_.cols == 0)
    throw DimensionError("Decoder: empty matrix");
  a_ = Matrix(f_.rows, 2 * f_.cols);
  for (std::size_t i = 0; i < f_.rows; ++i)
    for (std::size_t j = 0; j < f_.cols; ++j) {
      a_(i, j) = f_(i, j);
      a_(i, j + f_.cols) = -f_(i, j);
    }
  pre_ = lp::presolve(a_);
}

Result Decoder::decode(const Vector& e) const {
  return decode_with(f_, a_, &pre_, e, tol_);
}

}  // namespace csinst::basp
