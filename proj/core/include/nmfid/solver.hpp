// Copyright 2026 nmfid contributors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <cstdint>

#include "nmfid/result.hpp"
#include "nmfid/svd.hpp"

namespace nmfid {

enum class InitScheme { SpaInit, RandomFeasible };

struct SolverOptions {
  int max_sweeps = 200;
  double rel_tol = 1e-10;  // on the change of log|det Q| per sweep
  double feas_tol = 1e-9;
  double rho = 1.0;  // target column sum of H; any positive value works
  double rank_tol = 1e-8;
  InitScheme init = InitScheme::SpaInit;
  std::uint64_t seed = 0;
  bool clip_negatives = true;
  double safeguard_bound = 1e6;  // |q_j| box in every subproblem
};

/// Initial mixing matrix. SpaInit runs greedy max-volume column selection on
/// the reduced data and inverts the selected columns; RandomFeasible draws
/// each row as the optimum of a random-objective LP over the feasible set.
Matrix init_q(const ReducedModel& model, const SolverOptions& options);

struct AoSweepResult {
  Matrix q;
  bool improved = false;    // |det Q| grew by more than rel_tol (relative)
  bool box_active = false;  // some subproblem optimum hit the safeguard box
  bool reinitialized = false;  // a degenerate cofactor forced a row re-init
};

/// One cyclic pass: for every row index k, the cofactor vector p of row k
/// makes det(Q) = p·q_k linear in that row, and the constraints (H = (QX̃)ᵀ
/// nonnegative, column sums of H equal rho) are row-separable, so the row
/// update is exactly two LPs (maximize ±p·q); the larger |p·q| wins, ties
/// prefer +p. |det Q| never decreases once Q is feasible.
AoSweepResult ao_sweep(const Matrix& q, const ReducedModel& model,
                       const SolverOptions& options);

/// Determinant-maximization identification: SVD reduction, cyclic AO over
/// the rows of Q until the relative change of log|det Q| drops below
/// rel_tol, then H = (QX̃)ᵀ and W = U diag(Σ) Q⁻¹.
SolverResult solve_proposed(const Matrix& x, int rank,
                            const SolverOptions& options = {});

}  // namespace nmfid
