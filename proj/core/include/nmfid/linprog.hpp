// Copyright 2026 nmfid contributors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include "nmfid/matrix.hpp"

namespace nmfid {

/// maximize objective·x  subject to  ineq_lhs·x ≥ ineq_rhs,
/// eq_lhs·x = eq_rhs, and optional per-variable box bounds.
/// Empty bound vectors mean no bounds; ±infinity entries are allowed.
struct LinearProgram {
  Vector objective;
  Matrix ineq_lhs;  // may have zero rows
  Vector ineq_rhs;
  Matrix eq_lhs;  // may have zero rows
  Vector eq_rhs;
  Vector lower;
  Vector upper;

  int num_vars() const { return static_cast<int>(objective.size()); }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpOutcome {
  LpStatus status = LpStatus::Infeasible;
  Vector x;       // optimizer when Optimal, empty otherwise
  double value = 0.0;
};

/// Two-phase dense simplex with deterministic pivoting: largest-coefficient
/// entering rule, switching to Bland's rule when the objective stalls. When
/// the constraint count greatly exceeds the variable count the dual is
/// solved internally; the outcome contract is unchanged.
///
/// Throws CycleGuardExceeded when the pivot count passes
/// 50·(variables + constraints) of the tableau being solved.
LpOutcome solve_lp(const LinearProgram& lp, double feas_tol = 1e-9);

}  // namespace nmfid
