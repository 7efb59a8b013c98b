// Copyright 2026 nmfid contributors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include <doctest.h>

#include <cmath>

#include "nmfid/errors.hpp"
#include "nmfid/linalg.hpp"
#include "nmfid/rng.hpp"
#include "support/oracles.hpp"

using namespace nmfid;

TEST_CASE("determinant of simple matrices") {
  CHECK(determinant(Matrix::identity(4)) == doctest::Approx(1.0));
  CHECK(determinant(Matrix{{2, 0}, {0, 3}}) == doctest::Approx(6.0));
  CHECK(determinant(Matrix{{1, 2}, {2, 4}}) == doctest::Approx(0.0));
}

TEST_CASE("determinant matches cofactor expansion along every row") {
  std::mt19937_64 rng = make_rng(substream_seed(11, "det-oracle"));
  for (int rep = 0; rep < 20; ++rep) {
    Matrix q = oracles::random_uniform_matrix(5, 5, rng, -1.0, 1.0);
    const double d = determinant(q);
    for (int k = 0; k < 5; ++k) {
      const double oracle = oracles::det_cofactor_along_row(q, k);
      CHECK(d == doctest::Approx(oracle).epsilon(1e-10));
    }
  }
}

TEST_CASE("row permutation flips the determinant sign by parity") {
  std::mt19937_64 rng = make_rng(substream_seed(12, "det-perm"));
  Matrix q = oracles::random_uniform_matrix(4, 4, rng, -1.0, 1.0);
  const double d = determinant(q);
  Matrix swapped = q;
  for (int j = 0; j < 4; ++j) std::swap(swapped(0, j), swapped(2, j));
  CHECK(determinant(swapped) == doctest::Approx(-d).epsilon(1e-12));
  // Two swaps = even parity.
  for (int j = 0; j < 4; ++j) std::swap(swapped(1, j), swapped(3, j));
  CHECK(determinant(swapped) == doctest::Approx(d).epsilon(1e-12));
}

TEST_CASE("cofactor_vector on closed forms") {
  const double a = 1.5, b = -2.0, c = 0.5, d = 3.0;
  Vector p = cofactor_vector(Matrix{{a, b}, {c, d}}, 0);
  CHECK(p[0] == doctest::Approx(d));
  CHECK(p[1] == doctest::Approx(-c));
  Vector p1 = cofactor_vector(Matrix::identity(3), 1);
  CHECK(p1 == Vector{0.0, 1.0, 0.0});
}

TEST_CASE("cofactor_vector contracts with its row to the determinant") {
  std::mt19937_64 rng = make_rng(substream_seed(13, "cof"));
  for (int rep = 0; rep < 20; ++rep) {
    Matrix q = oracles::random_uniform_matrix(4, 4, rng, -1.0, 1.0);
    const double d = determinant(q);
    for (int k = 0; k < 4; ++k) {
      const Vector p = cofactor_vector(q, k);
      CHECK(dot(p, q.row(k)) == doctest::Approx(d).epsilon(1e-10));
    }
  }
}

TEST_CASE("gram_det closed forms and scaling laws") {
  Matrix ortho{{1, 0}, {0, 1}, {0, 0}};
  CHECK(gram_det(ortho) == doctest::Approx(1.0));
  CHECK(gram_det(2.0 * Matrix::identity(2)) == doctest::Approx(16.0));

  std::mt19937_64 rng = make_rng(substream_seed(14, "gram"));
  Matrix w = oracles::random_uniform_matrix(8, 3, rng, -1.0, 1.0);
  // Diagonal column scaling multiplies by the squared product.
  Matrix wd = w;
  const Vector diag{2.0, 0.5, 3.0};
  for (int i = 0; i < wd.rows(); ++i)
    for (int j = 0; j < 3; ++j) wd(i, j) *= diag[j];
  double prod = 1.0;
  for (double v : diag) prod *= v * v;
  CHECK(gram_det(wd) == doctest::Approx(gram_det(w) * prod).epsilon(1e-10));

  // Under W ← W·A⁻ᵀ the Gram determinant picks up |det A|⁻².
  for (int rep = 0; rep < 10; ++rep) {
    Matrix a = oracles::random_uniform_matrix(3, 3, rng, -1.0, 1.0);
    const double deta = determinant(a);
    if (std::fabs(deta) < 0.05) continue;
    Matrix wstar = multiply_a_bt(w, inverse(a));  // W·A⁻ᵀ
    CHECK(gram_det(wstar) ==
          doctest::Approx(gram_det(w) / (deta * deta)).epsilon(1e-8));
  }
}

TEST_CASE("gram_det clamps tiny negatives to zero") {
  // Rank-deficient W: det(WᵀW) is exactly 0 in theory; rounding may give a
  // tiny value of either sign.
  Matrix w{{1, 1}, {2, 2}, {3, 3}};
  CHECK(gram_det(w) >= 0.0);
  CHECK(gram_det(w) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("inverse and numeric_rank") {
  Matrix a{{2, 1}, {1, 2}};
  Matrix ainv = inverse(a);
  Matrix prod = a * ainv;
  CHECK(frobenius_norm(prod - Matrix::identity(2)) < 1e-12);
  CHECK_THROWS_AS(inverse(Matrix{{1, 2}, {2, 4}}), RankDeficient);

  CHECK(numeric_rank(Matrix{{1, 2}, {2, 4}}) == 1);
  CHECK(numeric_rank(Matrix::identity(5)) == 5);
  CHECK(numeric_rank(Matrix(3, 3)) == 0);
}
