// Copyright 2026 nmfid contributors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include "nmfid/matrix.hpp"

namespace nmfid {

/// Thin SVD, X = U diag(sigma) Vᵀ with min(m,n) singular triplets,
/// sigma non-increasing. Sign convention: the largest-magnitude entry of
/// each U column is positive, V follows.
struct SvdFactors {
  Matrix u;
  Vector sigma;
  Matrix v;
};

/// One-sided Jacobi SVD. Accurate to near machine precision for the dense
/// sizes this library targets (a few hundred rows/columns).
SvdFactors jacobi_svd(const Matrix& x);

/// Rank-r reduction of a data matrix: X ≈ U diag(sigma) Vᵀ with the top r
/// triplets, the reduced data X̃ = Vᵀ and its row sums s.
struct ReducedModel {
  Matrix u;       // M×r, column-orthonormal
  Vector sigma;   // r positive values, non-increasing
  Matrix v;       // N×r, column-orthonormal
  Matrix xtilde;  // r×N, equals Vᵀ
  Vector s;       // row sums of xtilde
  double residual = 0.0;  // ‖X − U diag(sigma) Vᵀ‖_F
  bool rank_ok = true;    // sigma_{r+1} ≤ rank_tol · sigma_1
};

struct SvdReduceOptions {
  double rank_tol = 1e-8;
  /// When true (default), a trailing singular value above rank_tol·sigma_1
  /// throws ResidualAboveTolerance; when false the model is returned with
  /// rank_ok = false so the caller can proceed with a warning.
  bool strict = true;
};

ReducedModel svd_reduce(const Matrix& x, int rank,
                        const SvdReduceOptions& options = {});

}  // namespace nmfid
