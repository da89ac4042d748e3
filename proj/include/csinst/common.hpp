#pragma once

#include <stdexcept>
#include <string>

namespace csinst {

// Central tolerance table. Every module reads its defaults from here and the
// CLI prints the same table via --show-config.
struct Tolerances {
  double eps_fail = 1e-6;  // BasP verdict: failure when ||d - e||inf > eps_fail
  double tau = 1e-6;       // support threshold for the numerical l0 norm
  double feas_tol = 1e-8;  // LP feasibility, relative to 1 + ||b||inf
  double gap_tol = 1e-8;   // LP duality gap, relative to 1 + |objective|
  std::size_t max_iter = 200;
};

// Pivot ratio below which a factorization declares rank deficiency.
inline constexpr double kRankPivotTol = 1e-10;
// ||F e||inf bound a null-space sample must satisfy.
inline constexpr double kNullspaceResidual = 1e-9;
// Least-squares residual below which the l0 oracle accepts a support.
inline constexpr double kOracleResidual = 1e-8;
// Strictness margin for dual certificates.
inline constexpr double kCertMargin = 1e-8;
// Largest support count the l0 oracle will enumerate.
inline constexpr double kOracleBudget = 1e7;

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct RankDeficientError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateSampleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// LP terminated without an optimal status while decoding.
struct DecodeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A proved inequality failed numerically; signals misconfigured tolerances.
struct ContractViolationError : std::logic_error {
  using std::logic_error::logic_error;
};

struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InitNotFailingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct HashMismatchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace csinst
