#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "csinst/isa.hpp"
#include "csinst/linalg.hpp"
#include "csinst/oracle.hpp"

using namespace csinst;

TEST_CASE("zero measurements have a sparsest fit of zero") {
  Matrix f = gaussian_matrix(4, 9, 2);
  auto fit = oracle::l0_oracle(f, Vector(4, 0.0), 9);
  REQUIRE(fit.has_value());
  CHECK(fit->k == 0);
  CHECK(fit->d == Vector(9, 0.0));
  CHECK(fit->supports_tested == 1);
}

TEST_CASE("a scaled column is found at support size one") {
  Matrix f(2, 3);
  f(0, 0) = 1;
  f(1, 0) = 0;
  f(0, 1) = 0;
  f(1, 1) = 1;
  f(0, 2) = 3;
  f(1, 2) = 4;
  auto fit = oracle::l0_oracle(f, {6, 8}, 3);
  REQUIRE(fit.has_value());
  CHECK(fit->k == 1);
  CHECK(std::abs(fit->d[2] - 2.0) < 1e-12);
  CHECK(fit->d[0] == 0.0);
  CHECK(fit->d[1] == 0.0);
  CHECK(fit->residual_inf <= 1e-12);
  CHECK(fit->extra_fits_at_k == 0);
}

TEST_CASE("duplicate columns are reported as ties at the same size") {
  Matrix g(2, 4);
  g(0, 0) = 1;
  g(1, 0) = 0;
  g(0, 1) = 0;
  g(1, 1) = 1;
  g(0, 2) = 1;  // same as column 0
  g(1, 2) = 0;
  g(0, 3) = 2;
  g(1, 3) = 3;
  auto fit = oracle::l0_oracle(g, {3, 0}, 2);
  REQUIRE(fit.has_value());
  CHECK(fit->k == 1);
  CHECK(fit->d[0] == 3.0);  // lexicographically first support wins
  CHECK(fit->extra_fits_at_k == 1);
}

TEST_CASE("a planted 2-sparse vector is recovered exactly") {
  Matrix f = orthonormalize_rows(gaussian_matrix(8, 20, 55));
  Vector e(20, 0.0);
  e[3] = 1.2;
  e[11] = -0.7;
  auto fit = oracle::l0_oracle(f, matvec(f, e), 4);
  REQUIRE(fit.has_value());
  CHECK(fit->k == 2);
  CHECK(fit->residual_inf <= 1e-8);
  CHECK(fit->extra_fits_at_k == 0);
  // whole size-2 level is enumerated to count ties: 1 + 20 + C(20,2)
  CHECK(fit->supports_tested == 211);
  for (std::size_t i = 0; i < 20; ++i)
    CHECK(std::abs(fit->d[i] - e[i]) < 1e-10);
}

TEST_CASE("nothing fits when the target is outside every candidate span") {
  Matrix f = orthonormalize_rows(gaussian_matrix(3, 8, 4));
  Vector y = {1.0, 2.0, 3.0};  // generic, so no 1-column fit
  CHECK(!oracle::l0_oracle(f, y, 1).has_value());
}

TEST_CASE("enumeration beyond the support budget throws") {
  // sum of C(4500, k) for k <= 2 passes 1e7 partway through size 2
  Matrix f = gaussian_matrix(3, 4500, 77);
  CHECK_THROWS_AS(oracle::l0_oracle(f, {1, 2, 3}, 2), BudgetError);
  CHECK_THROWS_AS(oracle::l0_oracle(f, {1, 2}, 1), DimensionError);
}

TEST_CASE("recoverable vectors carry strict certificates") {
  Matrix f = orthonormalize_rows(gaussian_matrix(8, 20, 101));
  Vector e(20, 0.0);
  e[4] = 2.5;
  e[9] = -1.0;
  oracle::Certificate cert = oracle::dual_certificate(f, e);
  CHECK(cert.exists);
  CHECK(cert.sign_residual <= 1e-8);
  CHECK(cert.strict);
  CHECK(cert.off_support_max < 1.0);
  REQUIRE(cert.w.size() == 8);
  // the certificate really interpolates the sign pattern
  Vector ftw = matvec_transpose(f, cert.w);
  CHECK(std::abs(ftw[4] - 1.0) <= 1e-8);
  CHECK(std::abs(ftw[9] + 1.0) <= 1e-8);
}

TEST_CASE("instantons never carry strict certificates") {
  Matrix f = orthonormalize_rows(gaussian_matrix(8, 20, 55));
  basp::Decoder dec(f);
  for (std::uint64_t seed : {1, 2, 3}) {
    Vector e0 = isa::random_init(20, 8, seed);
    basp::Result first = dec.decode(e0);
    REQUIRE(first.verdict == basp::Verdict::failure);
    isa::InstantonRecord rec = isa::isa_run(dec, e0, first, 20, seed, 8, "x");
    oracle::Certificate cert = oracle::dual_certificate(f, rec.instanton);
    CHECK(!cert.strict);
  }
}

TEST_CASE("degenerate supports are rejected") {
  Matrix g(2, 3);
  g(0, 0) = 1;
  g(1, 0) = 0;
  g(0, 1) = 1;  // duplicate of column 0
  g(1, 1) = 0;
  g(0, 2) = 0;
  g(1, 2) = 1;
  Vector d = {1.0, -1.0, 0.0};
  CHECK_THROWS_AS(oracle::dual_certificate(g, d), RankDeficientError);
  CHECK_THROWS_AS(oracle::dual_certificate(g, Vector(3, 0.0)), DimensionError);
}
