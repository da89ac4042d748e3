#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>

#include "csinst/linalg.hpp"
#include "csinst/lp.hpp"
#include "csinst/rng.hpp"

using namespace csinst;

namespace {

lp::StandardFormLP single_row(double a, double b, double c) {
  lp::StandardFormLP p;
  p.c = {c};
  p.a = Matrix(1, 1);
  p.a(0, 0) = a;
  p.b = {b};
  return p;
}

}  // namespace

TEST_CASE("cholesky factors SPD matrices and solves") {
  Matrix m(3, 3);
  double vals[3][3] = {{4, 2, -1}, {2, 5, 1}, {-1, 1, 6}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = vals[i][j];
  lp::Cholesky f = lp::cholesky(m);
  REQUIRE(f.ok);
  Vector x = {1, -2, 3};
  Vector rhs = matvec(m, x);
  f.solve(rhs);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(rhs[i] - x[i]) < 1e-12);

  Matrix nd(2, 2);
  nd(0, 0) = 1;
  nd(0, 1) = 2;
  nd(1, 0) = 2;
  nd(1, 1) = 1;  // eigenvalues 3 and -1
  CHECK(!lp::cholesky(nd).ok);
  CHECK_THROWS_AS(lp::cholesky(Matrix(2, 3)), DimensionError);
}

TEST_CASE("single equality constraint solves to the point") {
  auto s = lp::solve_lp(single_row(1, 2, 1));
  REQUIRE(s.status == lp::Status::optimal);
  CHECK(std::abs(s.x[0] - 2.0) < 1e-7);
  CHECK(std::abs(s.objective - 2.0) < 1e-7);
  CHECK(s.primal_residual <= 1e-8);
  CHECK(s.dual_residual <= 1e-8);
  CHECK(s.duality_gap <= 1e-8);
}

TEST_CASE("x = -1 with x >= 0 is reported infeasible") {
  auto s = lp::solve_lp(single_row(1, -1, 1));
  CHECK(s.status == lp::Status::infeasible);
  CHECK(!s.note.empty());
}

TEST_CASE("free negative-cost coordinate is reported unbounded") {
  // 0 * x = 0 leaves x unconstrained; cost -x has no minimum.
  auto s = lp::solve_lp(single_row(0, 0, -1));
  CHECK(s.status == lp::Status::unbounded);
}

TEST_CASE("negative-cost ray inside the constraints is unbounded") {
  lp::StandardFormLP p;
  p.c = {-1, 0};
  p.a = Matrix(1, 2);
  p.a(0, 0) = 1;
  p.a(0, 1) = -1;
  p.b = {0};
  auto s = lp::solve_lp(p);
  CHECK(s.status == lp::Status::unbounded);
}

TEST_CASE("degenerate-face optimum still meets the tolerances") {
  lp::StandardFormLP p;
  p.c = {1, 1};
  p.a = Matrix(1, 2);
  p.a(0, 0) = 1;
  p.a(0, 1) = 1;
  p.b = {1};
  auto s = lp::solve_lp(p);
  REQUIRE(s.status == lp::Status::optimal);
  CHECK(std::abs(s.objective - 1.0) <= 1e-8 * 2);
  CHECK(s.duality_gap <= 1e-8);
}

TEST_CASE("presolve drops dependent rows and reconstructs them") {
  Matrix a(3, 2);
  a(0, 0) = 1;
  a(0, 1) = 0;
  a(1, 0) = 0;
  a(1, 1) = 1;
  a(2, 0) = 1;
  a(2, 1) = 1;  // row2 = row0 + row1
  lp::Presolved pre = lp::presolve(a);
  REQUIRE(pre.kept.size() == 2);
  REQUIRE(pre.dropped.size() == 1);
  for (std::size_t t = 0; t < pre.dropped.size(); ++t)
    for (std::size_t j = 0; j < a.cols; ++j) {
      double rebuilt = 0.0;
      for (std::size_t i = 0; i < pre.kept.size(); ++i)
        rebuilt += pre.drop_coeffs(t, i) * a(pre.kept[i], j);
      CHECK(std::abs(rebuilt - a(pre.dropped[t], j)) < 1e-12);
    }
}

TEST_CASE("consistent duplicate rows solve, inconsistent ones are infeasible") {
  lp::StandardFormLP p;
  p.c = {1, 2};
  p.a = Matrix(2, 2);
  p.a(0, 0) = 1;
  p.a(0, 1) = 1;
  p.a(1, 0) = 1;
  p.a(1, 1) = 1;
  p.b = {1, 1};
  auto ok = lp::solve_lp(p);
  REQUIRE(ok.status == lp::Status::optimal);
  CHECK(std::abs(ok.objective - 1.0) < 1e-7);
  CHECK(ok.dual.size() == 2);

  p.b = {1, 2};
  auto bad = lp::solve_lp(p);
  CHECK(bad.status == lp::Status::infeasible);
  CHECK(bad.note.find("inconsistent") != std::string::npos);
}

TEST_CASE("zero constraint matrix with nonnegative cost is optimal at zero") {
  lp::StandardFormLP p;
  p.c = {2, 0};
  p.a = Matrix(1, 2);
  p.b = {0};
  auto s = lp::solve_lp(p);
  REQUIRE(s.status == lp::Status::optimal);
  CHECK(s.objective == 0.0);
  CHECK(s.x == Vector{0, 0});
}

TEST_CASE("tolerances and shapes are validated") {
  auto p = single_row(1, 2, 1);
  CHECK_THROWS_AS(lp::solve_lp(p, 0.0), DimensionError);
  CHECK_THROWS_AS(lp::solve_lp(p, 1e-8, 0.5), DimensionError);
  CHECK_THROWS_AS(lp::solve_lp(p, 1e-8, 1e-8, 0), DimensionError);
  p.b = {1, 2};
  CHECK_THROWS_AS(lp::solve_lp(p), DimensionError);
}

TEST_CASE("non-finite input yields a numerical_breakdown status") {
  auto p = single_row(1, 2, 1);
  p.b[0] = std::nan("");
  auto pre = lp::presolve(p.a);
  auto s = lp::solve_lp(p, pre);
  CHECK(s.status == lp::Status::numerical_breakdown);
}

TEST_CASE("status names are stable") {
  CHECK(std::strcmp(lp::status_name(lp::Status::optimal), "optimal") == 0);
  CHECK(std::strcmp(lp::status_name(lp::Status::infeasible), "infeasible") == 0);
  CHECK(std::strcmp(lp::status_name(lp::Status::unbounded), "unbounded") == 0);
  CHECK(std::strcmp(lp::status_name(lp::Status::iteration_limit),
                    "iteration_limit") == 0);
  CHECK(std::strcmp(lp::status_name(lp::Status::numerical_breakdown),
                    "numerical_breakdown") == 0);
}

TEST_CASE("planted feasible problems solve within the advertised bounds") {
  // Plant x* >= 0 and make the dual feasible by construction, so the
  // optimum exists and is bounded by the planted objective.
  for (int trial = 0; trial < 50; ++trial) {
    SplitMix64 rng(5000 + trial);
    std::size_t k = 3 + rng.next_below(18);
    std::size_t n = k + 1 + rng.next_below(3 * k);
    Matrix a(k, n);
    for (auto& v : a.data) v = rng.next_normal();
    Vector xs(n, 0.0);
    for (auto& v : xs)
      if (rng.next_unit() < 0.6) v = std::abs(rng.next_normal());
    Vector b = matvec(a, xs);
    Vector w(k);
    for (auto& v : w) v = rng.next_normal();
    Vector atw = matvec_transpose(a, w);
    Vector c(n);
    for (std::size_t i = 0; i < n; ++i)
      c[i] = std::abs(rng.next_normal()) + atw[i];
    double planted = 0.0;
    for (std::size_t i = 0; i < n; ++i) planted += c[i] * xs[i];

    lp::StandardFormLP prob{c, a, b};
    auto s = lp::solve_lp(prob);
    CAPTURE(trial);
    REQUIRE(s.status == lp::Status::optimal);
    CHECK(s.primal_residual <= 1e-8);
    CHECK(s.dual_residual <= 1e-8);
    CHECK(s.duality_gap <= 1e-8);
    CHECK(s.objective <= planted + 1e-8 * (1.0 + std::abs(planted)));
    for (double xi : s.x) CHECK(xi >= 0.0);
  }
}

TEST_CASE("solves are bit-for-bit deterministic") {
  SplitMix64 rng(321);
  std::size_t k = 8, n = 25;
  Matrix a(k, n);
  for (auto& v : a.data) v = rng.next_normal();
  Vector xs(n, 0.0);
  for (std::size_t i = 0; i < n; i += 2) xs[i] = std::abs(rng.next_normal());
  Vector b = matvec(a, xs);
  Vector c(n, 1.0);
  lp::StandardFormLP prob{c, a, b};
  auto s1 = lp::solve_lp(prob);
  auto s2 = lp::solve_lp(prob);
  REQUIRE(s1.status == lp::Status::optimal);
  REQUIRE(s2.status == lp::Status::optimal);
  CHECK(std::memcmp(s1.x.data(), s2.x.data(), n * sizeof(double)) == 0);
  CHECK(s1.objective == s2.objective);
  CHECK(s1.iterations == s2.iterations);

  // a presolve computed once and reused gives the same bits
  lp::Presolved pre = lp::presolve(a);
  auto s3 = lp::solve_lp(prob, pre);
  CHECK(std::memcmp(s1.x.data(), s3.x.data(), n * sizeof(double)) == 0);
}
