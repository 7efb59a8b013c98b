// Copyright 2026 nmfid contributors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <cstdint>

#include "nmfid/result.hpp"

namespace nmfid {

struct BaselineOptions {
  int max_iters = 2000;
  double rel_tol = 1e-10;
  std::uint64_t seed = 0;
  double lambda = 0.0;  // regularized variant only
  double rho = 1.0;     // column-sum target in the regularized H step
  double feas_tol = 1e-9;
  double rank_tol = 1e-8;
  bool clip_negative_input = false;  // plain NMF: clip X at 0 and flag
  double safeguard_bound = 1e6;
  double mves_inflation = 0.05;  // initial simplex inflation around centroid
  Matrix init_w;  // optional warm starts; empty = seeded random
  Matrix init_h;
};

/// Least-squares NMF by HALS (hierarchical alternating least squares).
/// Requires X ≥ 0; with clip_negative_input the data is clipped at zero and
/// the result carries a "clipped_input" flag. Objective trace =
/// ‖X − WHᵀ‖_F² per iteration, monotone non-increasing.
SolverResult solve_plain_nmf(const Matrix& x, int rank,
                             const BaselineOptions& options = {});

/// Volume minimization via a minimum-volume enclosing simplex: ℓ₁ column
/// normalization, affine reduction to dimension r−1, cyclic vertex updates
/// where each sign branch of the determinant is one LP, then lifting back
/// and undoing the normalization. Objective trace = |det Δ| per cycle.
SolverResult solve_volmin_mves(const Matrix& x, int rank,
                               const BaselineOptions& options = {});

/// Determinant-regularized fitting: ‖X − WHᵀ‖_F² + λ·det(WᵀW), alternating
/// a backtracking gradient step in W with a projected gradient step in H
/// (columns projected onto the rho-simplex).
SolverResult solve_regularized(const Matrix& x, int rank,
                               const BaselineOptions& options = {});

/// Euclidean projection onto {h ≥ 0, Σh = rho} (sort-based).
Vector project_simplex(std::span<const double> v, double rho = 1.0);

}  // namespace nmfid
