// Copyright 2026 nmfid contributors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)
//
// Brute-force reference implementations used only by tests. Each oracle is
// independent of the library code path it checks.

#pragma once

#include <optional>
#include <random>

#include "nmfid/linprog.hpp"
#include "nmfid/matrix.hpp"

namespace nmfid::oracles {

/// Determinant by recursive cofactor expansion along row 0.
double det_cofactor_expansion(const Matrix& q);

/// Determinant by cofactor expansion along a chosen row k.
double det_cofactor_along_row(const Matrix& q, int k);

struct LpOracleOutcome {
  bool feasible = false;
  double value = 0.0;
  Vector x;
};

/// Enumerates every candidate vertex (each choice of n active constraints
/// among inequalities, equalities, and box faces), keeps the feasible ones,
/// and returns the best objective. Requires a fully bounded box.
LpOracleOutcome lp_vertex_oracle(const LinearProgram& lp, double feas_tol = 1e-9);

/// Random LP with ≤ max_vars variables, ≤ max_ineq inequality rows, an
/// optional equality row, and a finite box.
LinearProgram random_lp(std::mt19937_64& rng, int max_vars = 6,
                        int max_ineq = 10);

/// Extreme rays of {y : H·y ≥ 0} by exhaustive (r−1)-subset enumeration of
/// active rows. Unit-length, deduplicated.
std::vector<Vector> rays_active_set_oracle(const Matrix& h, double tol = 1e-9);

/// Set equality of ray direction lists within an angular tolerance.
bool same_ray_sets(const std::vector<Vector>& a, const std::vector<Vector>& b,
                   double tol = 1e-8);

/// Permutation-minimized column MSE by trying all permutations (r ≤ 8).
double mse_factorial_oracle(const Matrix& h_est, const Matrix& h_ref);

/// Projection onto {h ≥ 0, Σh = rho} by enumerating every support set.
Vector project_simplex_oracle(std::span<const double> v, double rho);

Matrix random_uniform_matrix(int rows, int cols, std::mt19937_64& rng,
                             double lo = 0.0, double hi = 1.0);
Matrix random_gaussian_matrix(int rows, int cols, std::mt19937_64& rng);

}  // namespace nmfid::oracles
