// Copyright 2026 nmfid contributors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include <doctest.h>

#include <cmath>

#include "nmfid/errors.hpp"
#include "nmfid/rng.hpp"
#include "nmfid/synth.hpp"
#include "support/oracles.hpp"

using namespace nmfid;

TEST_CASE("generation is deterministic per seed") {
  GenSpec spec;
  spec.m = 60;
  spec.n = 60;
  spec.r = 4;
  spec.seed = 7;
  Instance a = generate(spec);
  Instance b = generate(spec);
  CHECK(a.x == b.x);
  CHECK(a.w_true == b.w_true);
  CHECK(a.h_true == b.h_true);

  spec.seed = 8;
  Instance c = generate(spec);
  CHECK_FALSE(a.x == c.x);
}

TEST_CASE("zero count is exact") {
  GenSpec spec;
  spec.m = 200;
  spec.n = 200;
  spec.r = 5;
  spec.sparsity = 0.35;
  spec.seed = 1;
  Instance inst = generate(spec);
  int zeros = 0;
  for (double v : inst.h_true.entries())
    if (v == 0.0) ++zeros;
  CHECK(zeros == 350);  // ⌊0.35·200·5⌋

  // SparseW also sparsifies W with the same recipe.
  int wzeros = 0;
  for (double v : inst.w_true.entries())
    if (v == 0.0) ++wzeros;
  CHECK(wzeros == 350);
}

TEST_CASE("column sums hit rho and the product is exact") {
  GenSpec spec;
  spec.m = 40;
  spec.n = 60;
  spec.r = 4;
  spec.rho = 2.5;
  spec.seed = 3;
  Instance inst = generate(spec);
  for (int k = 0; k < spec.r; ++k)
    CHECK(sum(inst.h_true.col(k)) == doctest::Approx(2.5).epsilon(1e-12));
  // X is stored as the computed product, bitwise.
  CHECK(inst.x == multiply_a_bt(inst.w_true, inst.h_true));
}

TEST_CASE("gaussian case leaves W unconstrained and H nonnegative") {
  GenSpec spec;
  spec.m = 80;
  spec.n = 80;
  spec.r = 4;
  spec.kind = GenCase::GaussianW;
  spec.seed = 5;
  Instance inst = generate(spec);
  CHECK(min_entry(inst.w_true) < 0.0);
  CHECK(min_entry(inst.h_true) >= 0.0);
}

TEST_CASE("generated H never has an all-zero row") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GenSpec spec;
    spec.m = 30;
    spec.n = 30;
    spec.r = 5;
    spec.sparsity = 0.5;
    spec.seed = seed;
    Instance inst = generate(spec);
    for (int i = 0; i < inst.h_true.rows(); ++i)
      CHECK(norm2(inst.h_true.row(i)) > 0.0);
  }
}

TEST_CASE("certification budget errors out on hopeless specs") {
  GenSpec spec;
  spec.m = 6;
  spec.n = 6;
  spec.r = 3;
  spec.sparsity = 0.9;
  spec.seed = 1;
  CHECK_THROWS_AS(generate(spec), CertifyBudgetExceeded);
}

TEST_CASE("exact certification reports on the instance") {
  GenSpec spec;
  spec.m = 30;
  spec.n = 30;
  spec.r = 3;
  spec.certify = CertifyMode::Exact;
  spec.seed = 11;
  Instance inst = generate(spec);
  REQUIRE(inst.h_report.has_value());
  CHECK(inst.h_report->scattered == Scattered::Yes);
  REQUIRE(inst.w_report.has_value());  // SparseW certifies W too
  CHECK(inst.w_report->scattered == Scattered::Yes);
}

TEST_CASE("mse basics") {
  Matrix h{{1, 0}, {0, 1}, {0.5, 0.5}};
  CHECK(mse(h, h) == doctest::Approx(0.0));

  // Permutation and positive column scaling leave the metric at zero.
  Matrix perm{{0, 3}, {2, 0}, {1, 1.5}};  // columns swapped, scaled by (2,3)
  CHECK(mse(perm, h) == doctest::Approx(0.0).epsilon(1e-15));

  // Closed form: (2−√2)/2.
  Matrix ref = Matrix::identity(2);
  Matrix est{{1, 0}, {1, 1}};
  CHECK(mse(est, ref) == doctest::Approx((2.0 - std::sqrt(2.0)) / 2.0));

  CHECK_THROWS_AS(mse(Matrix{{1, 0}}, Matrix::identity(2)), ShapeMismatch);
  CHECK_THROWS_AS(mse(Matrix{{1, 0}, {1, 0}}, Matrix::identity(2)),
                  ZeroColumn);
}

TEST_CASE("mse invariances on random pairs") {
  std::mt19937_64 rng = make_rng(substream_seed(51, "mse-invariance"));
  std::uniform_real_distribution<double> unit(0.1, 3.0);
  for (int rep = 0; rep < 25; ++rep) {
    Matrix a = oracles::random_uniform_matrix(8, 4, rng, 0.05, 1.0);
    Matrix b = oracles::random_uniform_matrix(8, 4, rng, 0.05, 1.0);
    CHECK(mse(a, b) >= 0.0);
    // Simultaneous column permutation of both arguments.
    auto permute_cols = [](const Matrix& m, const std::vector<int>& p) {
      Matrix out(m.rows(), m.cols());
      for (int j = 0; j < m.cols(); ++j) out.set_col(j, m.col(p[j]));
      return out;
    };
    const std::vector<int> p{2, 0, 3, 1};
    CHECK(mse(permute_cols(a, p), permute_cols(b, p)) ==
          doctest::Approx(mse(a, b)).epsilon(1e-12));

    // mse(A, A·Π·D) = 0.
    Matrix scaled_perm(8, 4);
    for (int j = 0; j < 4; ++j)
      scaled_perm.set_col(j, scaled(a.col(p[j]), unit(rng)));
    CHECK(mse(scaled_perm, a) == doctest::Approx(0.0).epsilon(1e-15));
  }
}

TEST_CASE("hungarian equals factorial brute force") {
  std::mt19937_64 rng = make_rng(substream_seed(52, "hungarian-oracle"));
  for (int rep = 0; rep < 30; ++rep) {
    const int r = 2 + static_cast<int>(rng() % 5);  // up to 6
    Matrix a = oracles::random_uniform_matrix(7, r, rng, 0.05, 1.0);
    Matrix b = oracles::random_uniform_matrix(7, r, rng, 0.05, 1.0);
    CHECK(mse(a, b) ==
          doctest::Approx(oracles::mse_factorial_oracle(a, b)).epsilon(1e-12));
  }
}

TEST_CASE("sampling certifier rarely refutes scattered-sparse instances") {
  // Small-scale stand-in for the overwhelming-probability behavior at
  // desk sizes; the acceptance suite runs the full-size version.
  int unknown = 0;
  const int total = 10;
  for (int seed = 0; seed < total; ++seed) {
    GenSpec spec;
    spec.m = 60;
    spec.n = 60;
    spec.r = 5;
    spec.seed = static_cast<std::uint64_t>(seed);
    spec.certify = CertifyMode::None;
    Instance inst = generate(spec);
    ScatterVerdict v = refute_by_sampling(inst.h_true, 200, 99);
    if (v.scattered == Scattered::Unknown) ++unknown;
  }
  CHECK(unknown >= 9);
}
