// Copyright 2026 nmfid contributors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include <doctest.h>

#include <cmath>

#include "nmfid/errors.hpp"
#include "nmfid/linalg.hpp"
#include "nmfid/rng.hpp"
#include "nmfid/solver.hpp"
#include "nmfid/synth.hpp"
#include "support/oracles.hpp"

using namespace nmfid;

namespace {

// The r=2 separable construction: rows of H include scaled coordinate
// vectors, so H is sufficiently scattered (for r=2, C is the orthant).
struct TinyInstance {
  Matrix x, w, h;
};

TinyInstance separable_r2() {
  TinyInstance t;
  t.w = Matrix{{1, 0}, {0, 1}, {1, 1}};
  // Coordinate rows carry the largest scale so the pure data columns
  // dominate the successive-projection pick.
  Matrix rows{{1, 0}, {0, 1}, {0.2, 0.2}, {0.25, 0.1}};
  Vector colsum(2, 0.0);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 2; ++j) colsum[j] += rows(i, j);
  t.h = Matrix(4, 2);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 2; ++j) t.h(i, j) = rows(i, j) / colsum[j];
  // Counter-scale W so X matches the normalized H.
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 2; ++j) t.w(i, j) *= colsum[j];
  t.x = multiply_a_bt(t.w, t.h);
  return t;
}

// Q with (Q·X̃)ᵀ equal to the ground-truth H: Q = Hᵀ·V.
Matrix q_from_truth(const ReducedModel& model, const Matrix& h_true) {
  return multiply_at_b(h_true, transpose(model.xtilde));
}

}  // namespace

TEST_CASE("r=1 data collapses to a single LP") {
  Matrix x{{2.0}, {4.0}, {6.0}};
  SolverResult res = solve_proposed(x, 1);
  CHECK(res.converged);
  CHECK(res.residuals.reconstruction < 1e-12);
  CHECK(sum(res.h.col(0)) == doctest::Approx(1.0));
  CHECK(min_entry(res.h) >= 0.0);
}

TEST_CASE("identity data: init has unit determinant and solve recovers") {
  ReducedModel model = svd_reduce(Matrix::identity(3), 3);
  SolverOptions options;
  Matrix q0 = init_q(model, options);
  CHECK(std::fabs(determinant(q0)) == doctest::Approx(1.0).epsilon(1e-12));
  // Permutation-scaled: one nonzero per row.
  for (int i = 0; i < 3; ++i) {
    int nonzero = 0;
    for (int j = 0; j < 3; ++j)
      if (std::fabs(q0(i, j)) > 1e-12) ++nonzero;
    CHECK(nonzero == 1);
  }
  SolverResult res = solve_proposed(Matrix::identity(3), 3);
  CHECK(res.converged);
  CHECK(mse(res.h, Matrix::identity(3)) < 1e-12);
}

TEST_CASE("successive-projection init is feasible on separable data") {
  TinyInstance t = separable_r2();
  ReducedModel model = svd_reduce(t.x, 2);
  SolverOptions options;
  Matrix q0 = init_q(model, options);
  Matrix qx = q0 * model.xtilde;
  CHECK(min_entry(qx) >= -1e-9);
  for (int k = 0; k < 2; ++k)
    CHECK(dot(model.s, q0.row(k)) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("random feasible init is deterministic per seed") {
  TinyInstance t = separable_r2();
  ReducedModel model = svd_reduce(t.x, 2);
  SolverOptions options;
  options.init = InitScheme::RandomFeasible;
  options.seed = 42;
  Matrix a = init_q(model, options);
  Matrix b = init_q(model, options);
  CHECK(a == b);
  CHECK(std::fabs(determinant(a)) > 0.0);
}

TEST_CASE("recovery up to permutation and positive scaling (r=2)") {
  TinyInstance t = separable_r2();
  SolverResult res = solve_proposed(t.x, 2);
  CHECK(res.converged);
  CHECK(mse(res.h, t.h) < 1e-10);
  CHECK(res.residuals.reconstruction <= 1e-8);
  CHECK(res.residuals.min_h_entry >= -1e-9);
  CHECK(res.residuals.max_colsum_dev <= 1e-8);
}

TEST_CASE("sweeps never decrease the determinant once feasible") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    GenSpec spec;
    spec.m = 25;
    spec.n = 30;
    spec.r = 3;
    spec.seed = seed;
    Instance inst = generate(spec);
    SolverResult res = solve_proposed(inst.x, 3);
    const auto& trace = res.objective_trace;
    REQUIRE(trace.size() >= 2);
    for (std::size_t i = 1; i < trace.size(); ++i)
      CHECK(trace[i] >= trace[i - 1] * (1.0 - 1e-12));
  }
}

TEST_CASE("a ground-truth-optimal Q is a fixed point of the sweep") {
  GenSpec spec;
  spec.m = 30;
  spec.n = 30;
  spec.r = 3;
  spec.seed = 11;
  spec.certify = CertifyMode::Exact;
  Instance inst = generate(spec);
  REQUIRE(inst.h_report->scattered == Scattered::Yes);

  ReducedModel model = svd_reduce(inst.x, 3);
  Matrix q_true = q_from_truth(model, inst.h_true);
  // Sanity: Q·X̃ reproduces Hᵀ.
  Matrix qx = q_true * model.xtilde;
  CHECK(frobenius_norm(qx - transpose(inst.h_true)) < 1e-9);

  SolverOptions options;
  AoSweepResult sweep = ao_sweep(q_true, model, options);
  CHECK_FALSE(sweep.improved);
  CHECK(std::fabs(determinant(sweep.q)) ==
        doctest::Approx(std::fabs(determinant(q_true))).epsilon(1e-9));
}

TEST_CASE("degenerate cofactor triggers a row re-draw") {
  TinyInstance t = separable_r2();
  ReducedModel model = svd_reduce(t.x, 2);
  Matrix singular{{0.7, 0.3}, {0.0, 0.0}};  // zero row: cofactors of row 0 vanish
  SolverOptions options;
  AoSweepResult sweep = ao_sweep(singular, model, options);
  CHECK(sweep.reinitialized);
  CHECK(std::fabs(determinant(sweep.q)) > 0.0);
}

TEST_CASE("gram determinant identity links W, sigma and Q") {
  GenSpec spec;
  spec.m = 30;
  spec.n = 35;
  spec.r = 4;
  spec.seed = 9;
  Instance inst = generate(spec);
  SolverResult res = solve_proposed(inst.x, 4);
  ReducedModel model = svd_reduce(inst.x, 4);
  double sigma_prod = 1.0;
  for (double s : model.sigma) sigma_prod *= s;
  const double detq = determinant(res.q);
  CHECK(gram_det(res.w) ==
        doctest::Approx(sigma_prod * sigma_prod / (detq * detq))
            .epsilon(1e-8));
}

TEST_CASE("rho rescales the solution exactly") {
  TinyInstance t = separable_r2();
  SolverOptions one;
  one.seed = 5;
  SolverOptions two = one;
  two.rho = 2.0;
  SolverResult r1 = solve_proposed(t.x, 2, one);
  SolverResult r2 = solve_proposed(t.x, 2, two);
  REQUIRE(r1.h.size() == r2.h.size());
  for (std::size_t i = 0; i < r1.h.size(); ++i)
    CHECK(r2.h.entries()[i] == 2.0 * r1.h.entries()[i]);
  for (std::size_t i = 0; i < r1.w.size(); ++i)
    CHECK(r2.w.entries()[i] == 0.5 * r1.w.entries()[i]);
}

TEST_CASE("outside the scattered hypothesis only feasibility is claimed") {
  // Rows span permutations of (2,1,0): full rank, nonnegative, certified No.
  Matrix pattern{{2, 1, 0}, {2, 0, 1}, {1, 2, 0}, {0, 2, 1},
                 {1, 0, 2}, {0, 1, 2}, {1, 1, 1}, {2, 2, 2}};
  Matrix h(8, 3);
  Vector colsum(3, 0.0);
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 8; ++i) colsum[j] += pattern(i, j);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 3; ++j) h(i, j) = pattern(i, j) / colsum[j];
  CHECK(check_sufficiently_scattered(h).scattered == Scattered::No);

  std::mt19937_64 rng = make_rng(substream_seed(61, "unscattered"));
  Matrix w = oracles::random_uniform_matrix(6, 3, rng, 0.1, 1.0);
  Matrix x = multiply_a_bt(w, h);
  SolverResult res = solve_proposed(x, 3);
  CHECK(res.residuals.min_h_entry >= -1e-9);
  CHECK(res.residuals.max_colsum_dev <= 1e-8);
  CHECK(res.residuals.reconstruction <= 1e-8);
  const auto& trace = res.objective_trace;
  for (std::size_t i = 1; i < trace.size(); ++i)
    CHECK(trace[i] >= trace[i - 1] * (1.0 - 1e-12));
}

TEST_CASE("recovered transform is a scaled permutation when certified") {
  GenSpec spec;
  spec.m = 30;
  spec.n = 30;
  spec.r = 3;
  spec.seed = 17;
  spec.certify = CertifyMode::Exact;
  Instance inst = generate(spec);
  SolverResult res = solve_proposed(inst.x, 3);
  CHECK(mse(res.h, inst.h_true) < 1e-10);

  // A = argmin ‖H♮·A − H⋆‖_F: column-normalized it must be a permutation.
  Matrix gram = multiply_at_b(inst.h_true, inst.h_true);
  Matrix rhs = multiply_at_b(inst.h_true, res.h);
  Matrix a = inverse(gram) * rhs;
  for (int j = 0; j < 3; ++j) {
    Vector col = a.col(j);
    const double nrm = norm2(col);
    int big = 0;
    for (double v : col)
      if (std::fabs(v) / nrm > 1e-6) ++big;
    CHECK(big == 1);
  }
}

TEST_CASE("invalid rho is rejected") {
  SolverOptions o;
  o.rho = 0.0;
  CHECK_THROWS_AS(solve_proposed(Matrix::identity(2), 2, o), Error);
}
