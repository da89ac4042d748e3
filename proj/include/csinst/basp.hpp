#pragma once

#include <cstddef>
#include <vector>

#include "csinst/common.hpp"
#include "csinst/lp.hpp"
#include "csinst/matrix.hpp"

namespace csinst::basp {

enum class Verdict { success, failure };

const char* verdict_name(Verdict v);

struct Result {
  Vector d;         // the l1 minimizer, length m
  Verdict verdict;  // success iff ||d - e||inf <= eps_fail
  double l1_norm = 0.0;
  double deviation = 0.0;             // ||d - e||inf
  double measurement_residual = 0.0;  // ||F d - y~||inf / (1 + ||y~||inf)
  lp::Status lp_status = lp::Status::numerical_breakdown;
  std::size_t lp_iterations = 0;
  double lp_gap = 0.0;
};

// Split-variable encoding of min ||d||_1 s.t. F d = y~ as a standard-form LP:
// variables (d+, d-) >= 0 with d = d+ - d-, cost sum(d+) + sum(d-),
// constraints [F  -F] (d+, d-) = y~. 2m variables, p rows.
lp::StandardFormLP encode(const Matrix& f, const Vector& y_tilde);

// Decode e's measurements: y~ = F e, solve the LP, reconstruct d. A failure
// verdict means d differs from e; exact-norm ties with d != e count as
// failure. Throws DecodeError when the LP does not reach optimal status.
// Verdicts whose deviation falls near eps_fail (inside (1e-8, 1e-3]) are
// re-adjudicated from a second solve at a fixed 1e-12 stop, because the
// solver's x error on a degenerate optimal face can straddle the threshold
// at the default stop. The band is fixed, so d never depends on eps_fail.
Result decode(const Matrix& f, const Vector& e, double eps_fail = 1e-6);

// {i : |v_i| > tau}, ascending. Strict inequality: exact zeros never count.
std::vector<std::size_t> threshold_support(const Vector& v, double tau);

// |threshold_support(v, tau)|
std::size_t l0_norm(const Vector& v, double tau);

// Per-matrix decoder. Builds the [F -F] constraint matrix and its presolve
// once, so repeated decodes skip the rank analysis and the A A^T factor.
// Immutable after construction; safe to share across concurrent decodes.
class Decoder {
 public:
  explicit Decoder(Matrix f, Tolerances tol = {});

  const Matrix& matrix() const { return f_; }
  const Tolerances& tolerances() const { return tol_; }

  Result decode(const Vector& e) const;

 private:
  Matrix f_;
  Tolerances tol_;
  Matrix a_;  // [F -F]
  lp::Presolved pre_;
};

}  // namespace csinst::basp
