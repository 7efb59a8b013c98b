// Copyright 2026 nmfid contributors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include <doctest.h>

#include <cmath>

#include "nmfid/errors.hpp"
#include "nmfid/rng.hpp"
#include "nmfid/svd.hpp"
#include "support/oracles.hpp"

using namespace nmfid;

namespace {

double orthonormality_defect(const Matrix& u) {
  const Matrix g = multiply_at_b(u, u);
  double worst = 0.0;
  for (int i = 0; i < g.rows(); ++i)
    for (int j = 0; j < g.cols(); ++j)
      worst = std::max(worst, std::fabs(g(i, j) - (i == j ? 1.0 : 0.0)));
  return worst;
}

Matrix reconstruct(const ReducedModel& m) {
  Matrix us = m.u;
  for (int i = 0; i < us.rows(); ++i)
    for (int j = 0; j < us.cols(); ++j) us(i, j) *= m.sigma[j];
  return multiply_a_bt(us, m.v);
}

}  // namespace

TEST_CASE("identity input") {
  ReducedModel m = svd_reduce(Matrix::identity(3), 3);
  for (double s : m.sigma) CHECK(s == doctest::Approx(1.0));
  CHECK(m.residual < 1e-12);
  CHECK(orthonormality_defect(m.u) < 1e-10);
  CHECK(orthonormality_defect(m.v) < 1e-10);
  // X̃ is a sign-fixed permutation of the identity.
  for (int i = 0; i < 3; ++i) {
    int ones = 0;
    for (int j = 0; j < 3; ++j) {
      if (std::fabs(m.xtilde(i, j) - 1.0) < 1e-12) ++ones;
      else CHECK(std::fabs(m.xtilde(i, j)) < 1e-12);
    }
    CHECK(ones == 1);
  }
}

TEST_CASE("rank-1 outer product") {
  std::mt19937_64 rng = make_rng(substream_seed(21, "svd-rank1"));
  Matrix u = oracles::random_gaussian_matrix(7, 1, rng);
  Matrix v = oracles::random_gaussian_matrix(5, 1, rng);
  const double nu = frobenius_norm(u), nv = frobenius_norm(v);
  for (int i = 0; i < 7; ++i) u(i, 0) /= nu;
  for (int i = 0; i < 5; ++i) v(i, 0) /= nv;
  Matrix x = multiply_a_bt(u, v);
  ReducedModel m = svd_reduce(x, 1);
  CHECK(m.sigma[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m.residual < 1e-12);
}

TEST_CASE("exactly rank-r product reconstructs within 1e-10 sigma_1") {
  std::mt19937_64 rng = make_rng(substream_seed(22, "svd-rankr"));
  Matrix w = oracles::random_gaussian_matrix(40, 3, rng);
  Matrix h = oracles::random_gaussian_matrix(40, 3, rng);
  Matrix x = multiply_a_bt(w, h);
  ReducedModel m = svd_reduce(x, 3);
  CHECK(m.rank_ok);
  CHECK(m.residual <= 1e-10 * m.sigma[0]);
  CHECK(frobenius_norm(x - reconstruct(m)) <= 1e-9 * m.sigma[0]);
  CHECK(orthonormality_defect(m.u) < 1e-10);
  CHECK(orthonormality_defect(m.v) < 1e-10);
  CHECK(m.sigma[0] >= m.sigma[1]);
  CHECK(m.sigma[1] >= m.sigma[2]);
  CHECK(m.sigma[2] > 0.0);

  // Row sums of the reduced data.
  for (int i = 0; i < 3; ++i)
    CHECK(m.s[i] == doctest::Approx(sum(m.xtilde.row(i))));
}

TEST_CASE("wide matrices go through the transposed path") {
  std::mt19937_64 rng = make_rng(substream_seed(23, "svd-wide"));
  Matrix x = oracles::random_gaussian_matrix(4, 9, rng);
  ReducedModel m = svd_reduce(x, 4);
  CHECK(frobenius_norm(x - reconstruct(m)) <= 1e-10 * m.sigma[0]);
}

TEST_CASE("full-rank input above rank budget raises or flags") {
  std::mt19937_64 rng = make_rng(substream_seed(24, "svd-res"));
  Matrix x = oracles::random_gaussian_matrix(6, 6, rng);
  CHECK_THROWS_AS(svd_reduce(x, 2), ResidualAboveTolerance);
  ReducedModel m = svd_reduce(x, 2, {1e-8, /*strict=*/false});
  CHECK_FALSE(m.rank_ok);
  CHECK(m.residual > 0.0);
}

TEST_CASE("deterministic output and sign convention") {
  std::mt19937_64 rng = make_rng(substream_seed(25, "svd-sign"));
  Matrix x = oracles::random_gaussian_matrix(12, 8, rng);
  ReducedModel a = svd_reduce(x, 5, {1e-8, false});
  ReducedModel b = svd_reduce(x, 5, {1e-8, false});
  CHECK(a.u == b.u);
  CHECK(a.v == b.v);
  for (int j = 0; j < 5; ++j) {
    int arg = 0;
    double best = 0.0;
    for (int i = 0; i < a.u.rows(); ++i)
      if (std::fabs(a.u(i, j)) > best) {
        best = std::fabs(a.u(i, j));
        arg = i;
      }
    CHECK(a.u(arg, j) > 0.0);
  }
}

TEST_CASE("rank argument validation") {
  CHECK_THROWS_AS(svd_reduce(Matrix::identity(3), 0), ShapeMismatch);
  CHECK_THROWS_AS(svd_reduce(Matrix::identity(3), 4), ShapeMismatch);
  // Input of true rank 1 cannot produce a positive second singular value.
  Matrix x{{1, 1}, {1, 1}};
  CHECK_THROWS_AS(svd_reduce(x, 2), RankDeficient);
}
