// Copyright 2026 nmfid contributors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include "nmfid/matrix.hpp"

namespace nmfid {

/// LU factorization with partial pivoting, PA = LU packed in one matrix.
struct LuFactors {
  Matrix lu;
  std::vector<int> perm;  // row i of U came from row perm[i] of A
  int sign = 1;           // permutation parity
  bool singular = false;
};

LuFactors lu_factor(Matrix a);
Vector lu_solve(const LuFactors& f, std::span<const double> b);

/// Determinant via LU with partial pivoting. Singular matrices give 0.
double determinant(const Matrix& q);

/// Matrix inverse; throws RankDeficient on singular input.
Matrix inverse(const Matrix& a);

/// Cofactor vector along index k: p[j] = (-1)^{k+j} det(Q with row k and
/// column j deleted), so that dot(p, row k of Q) == det(Q).
Vector cofactor_vector(const Matrix& q, int k);

/// det(WᵀW), clamped at zero when rounding makes it negative.
double gram_det(const Matrix& w);

/// Numerical rank by Gaussian elimination with full pivoting; a pivot below
/// rel_tol times the largest entry counts as zero.
int numeric_rank(Matrix a, double rel_tol = 1e-10);

}  // namespace nmfid
