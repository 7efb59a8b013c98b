// Copyright 2026 nmfid contributors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include "nmfid/linprog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "nmfid/errors.hpp"

namespace nmfid {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-9;

// Canonical form: maximize obj·z subject to rows·z ≤ rhs, z ≥ 0.
struct Canonical {
  int n = 0;
  std::vector<Vector> rows;
  Vector rhs;
  Vector obj;

  int m() const { return static_cast<int>(rows.size()); }
};

struct CanonicalOutcome {
  LpStatus status = LpStatus::Infeasible;
  Vector x;
  Vector duals;  // one multiplier per row, ≥ 0 at optimality
  double value = 0.0;
};

// Dense two-phase tableau simplex on the canonical form.
CanonicalOutcome simplex_solve(const Canonical& input, long pivot_cap) {
  const int n = input.n;
  const int m = input.m();

  // Row equilibration; dual multipliers are scaled back on exit.
  std::vector<Vector> rows = input.rows;
  Vector rhs = input.rhs;
  Vector row_scale(m, 1.0);
  for (int i = 0; i < m; ++i) {
    double mx = 0.0;
    for (double v : rows[i]) mx = std::max(mx, std::fabs(v));
    if (mx > 0.0) {
      row_scale[i] = mx;
      for (double& v : rows[i]) v /= mx;
      rhs[i] /= mx;
    }
  }
  double obj_scale = 0.0;
  for (double v : input.obj) obj_scale = std::max(obj_scale, std::fabs(v));
  if (obj_scale == 0.0) obj_scale = 1.0;

  // Columns: [0,n) variables, [n,n+m) slacks, artificials afterwards.
  std::vector<int> art_rows;
  for (int i = 0; i < m; ++i)
    if (rhs[i] < 0.0) art_rows.push_back(i);
  const int art_start = n + m;
  const int width = art_start + static_cast<int>(art_rows.size());

  std::vector<Vector> tab(m, Vector(width, 0.0));
  Vector b(m);
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) tab[i][j] = rows[i][j];
    tab[i][n + i] = 1.0;
    b[i] = rhs[i];
    basis[i] = n + i;
  }
  for (std::size_t a = 0; a < art_rows.size(); ++a) {
    const int i = art_rows[a];
    for (int j = 0; j <= n + m; ++j) tab[i][j] = -tab[i][j];
    tab[i][n + i] = -1.0;
    b[i] = -b[i];
    tab[i][art_start + static_cast<int>(a)] = 1.0;
    basis[i] = art_start + static_cast<int>(a);
  }

  // Reduced-cost rows store z_j − c_j: optimal when all ≥ −kCostTol.
  Vector red1(width, 0.0);  // phase 1: maximize −Σ artificials
  Vector red2(width, 0.0);  // phase 2: the scaled objective
  for (int j = 0; j < width; ++j) {
    double z = 0.0;
    for (int i : art_rows) z -= tab[i][j];
    red1[j] = z + (j >= art_start ? 1.0 : 0.0);
  }
  for (int j = 0; j < n; ++j) red2[j] = -input.obj[j] / obj_scale;

  long pivots = 0;
  bool bland = false;
  int stall = 0;
  const int stall_limit = 2 * (m + n) + 16;

  auto objective_value = [&](const Vector& cost_of_col) {
    double v = 0.0;
    for (int i = 0; i < m; ++i) v += cost_of_col[basis[i]] * b[i];
    return v;
  };
  Vector cost1(width, 0.0), cost2(width, 0.0);
  for (int j = art_start; j < width; ++j) cost1[j] = -1.0;
  for (int j = 0; j < n; ++j) cost2[j] = input.obj[j] / obj_scale;

  auto pivot = [&](int r, int c) {
    const double piv = tab[r][c];
    for (int j = 0; j < width; ++j) tab[r][j] /= piv;
    b[r] /= piv;
    tab[r][c] = 1.0;
    for (int i = 0; i < m; ++i) {
      if (i == r) continue;
      const double f = tab[i][c];
      if (f == 0.0) continue;
      for (int j = 0; j < width; ++j) tab[i][j] -= f * tab[r][j];
      tab[i][c] = 0.0;
      b[i] -= f * b[r];
    }
    for (Vector* red : {&red1, &red2}) {
      const double f = (*red)[c];
      if (f == 0.0) continue;
      for (int j = 0; j < width; ++j) (*red)[j] -= f * tab[r][j];
      (*red)[c] = 0.0;
    }
    basis[r] = c;
    ++pivots;
  };

  // Runs pivots for one phase. Returns false when unbounded.
  auto run = [&](Vector& red, const Vector& cost, int col_limit) -> bool {
    double prev = objective_value(cost);
    for (;;) {
      int enter = -1;
      if (bland) {
        for (int j = 0; j < col_limit; ++j) {
          if (red[j] < -kCostTol) {
            enter = j;
            break;
          }
        }
      } else {
        double best = -kCostTol;
        for (int j = 0; j < col_limit; ++j) {
          if (red[j] < best) {
            best = red[j];
            enter = j;
          }
        }
      }
      if (enter < 0) return true;  // optimal for this phase

      int leave = -1;
      double best_ratio = kInf;
      for (int i = 0; i < m; ++i) {
        const double a = tab[i][enter];
        if (a <= kPivotTol) continue;
        const double ratio = b[i] / a;
        if (ratio < best_ratio - 1e-12 ||
            (ratio < best_ratio + 1e-12 &&
             (leave < 0 || basis[i] < basis[leave]))) {
          best_ratio = ratio;
          leave = i;
        }
      }
      if (leave < 0) return false;  // unbounded direction

      pivot(leave, enter);
      if (pivots > pivot_cap)
        throw CycleGuardExceeded("simplex pivot cap exceeded");

      const double cur = objective_value(cost);
      if (cur > prev + 1e-12 * (1.0 + std::fabs(prev))) {
        stall = 0;
      } else if (++stall > stall_limit) {
        bland = true;
      }
      prev = cur;
    }
  };

  CanonicalOutcome out;

  if (!art_rows.empty()) {
    double b_norm = 0.0;
    for (int i : art_rows) b_norm = std::max(b_norm, std::fabs(b[i]));
    if (!run(red1, cost1, art_start))
      throw LpFailure("phase 1 reported unbounded");
    if (objective_value(cost1) < -kCostTol * (1.0 + b_norm)) {
      out.status = LpStatus::Infeasible;
      return out;
    }
    // Drive leftover artificials out of the basis where possible.
    for (int i = 0; i < m; ++i) {
      if (basis[i] < art_start) continue;
      int c = -1;
      for (int j = 0; j < art_start; ++j) {
        if (std::fabs(tab[i][j]) > kPivotTol) {
          c = j;
          break;
        }
      }
      if (c >= 0) pivot(i, c);
      // Otherwise the row is redundant; the artificial stays basic at zero.
    }
    stall = 0;
    bland = false;
  }

  if (!run(red2, cost2, art_start)) {
    out.status = LpStatus::Unbounded;
    return out;
  }

  out.status = LpStatus::Optimal;
  out.x.assign(n, 0.0);
  for (int i = 0; i < m; ++i)
    if (basis[i] < n) out.x[basis[i]] = b[i];
  out.duals.assign(m, 0.0);
  for (int i = 0; i < m; ++i) {
    // Negated rows carry a −1 slack coefficient, flipping the multiplier.
    const double sign = std::find(art_rows.begin(), art_rows.end(), i) !=
                                art_rows.end()
                            ? -1.0
                            : 1.0;
    double y = sign * red2[n + i] * obj_scale / row_scale[i];
    out.duals[i] = y < 0.0 ? 0.0 : y;
  }
  out.value = 0.0;
  for (int j = 0; j < n; ++j) out.value += input.obj[j] * out.x[j];
  return out;
}

// Mapping from the user-facing variables to canonical (nonnegative) ones.
struct VarMap {
  enum class Kind { Direct, Shifted, Split } kind = Kind::Direct;
  int zpos = -1;
  int zneg = -1;
  double shift = 0.0;
};

struct Translation {
  Canonical canon;
  std::vector<VarMap> vars;
  bool infeasible_box = false;
};

// A linear functional над the original variables becomes canonical
// coefficients plus a constant picked up from shifted variables.
void accumulate(const std::vector<VarMap>& vars, std::span<const double> coef,
                Vector& out, double& constant) {
  for (std::size_t j = 0; j < coef.size(); ++j) {
    const double c = coef[j];
    if (c == 0.0) continue;
    const VarMap& vm = vars[j];
    switch (vm.kind) {
      case VarMap::Kind::Direct:
        out[vm.zpos] += c;
        break;
      case VarMap::Kind::Shifted:
        out[vm.zpos] += c;
        constant += c * vm.shift;
        break;
      case VarMap::Kind::Split:
        out[vm.zpos] += c;
        out[vm.zneg] -= c;
        break;
    }
  }
}

Translation translate(const LinearProgram& lp, double feas_tol) {
  const int n0 = lp.num_vars();
  Translation tr;
  tr.vars.resize(n0);

  int nz = 0;
  for (int j = 0; j < n0; ++j) {
    const double l = lp.lower.empty() ? -kInf : lp.lower[j];
    const double u = lp.upper.empty() ? kInf : lp.upper[j];
    if (l > u + feas_tol) {
      tr.infeasible_box = true;
      return tr;
    }
    VarMap& vm = tr.vars[j];
    if (l == 0.0) {
      vm.kind = VarMap::Kind::Direct;
      vm.zpos = nz++;
    } else if (std::isfinite(l) && l > 0.0) {
      vm.kind = VarMap::Kind::Shifted;
      vm.zpos = nz++;
      vm.shift = l;
    } else {
      vm.kind = VarMap::Kind::Split;
      vm.zpos = nz++;
      vm.zneg = nz++;
    }
  }
  tr.canon.n = nz;
  tr.canon.obj.assign(nz, 0.0);
  double obj_const = 0.0;
  accumulate(tr.vars, lp.objective, tr.canon.obj, obj_const);

  // canonical ≤ row: coef·x ≤ rhs in original variables. Rows whose
  // coefficients vanish are resolved immediately.
  auto add_le_row = [&](std::span<const double> coef, double rhs) {
    Vector row(nz, 0.0);
    double constant = 0.0;
    accumulate(tr.vars, coef, row, constant);
    double mx = 0.0;
    for (double v : row) mx = std::max(mx, std::fabs(v));
    if (mx <= 1e-300) {
      if (constant > rhs + feas_tol) tr.infeasible_box = true;
      return;
    }
    tr.canon.rows.push_back(std::move(row));
    tr.canon.rhs.push_back(rhs - constant);
  };

  Vector coef(n0, 0.0);
  for (int i = 0; i < lp.ineq_lhs.rows(); ++i) {
    for (int j = 0; j < n0; ++j) coef[j] = -lp.ineq_lhs(i, j);
    add_le_row(coef, -lp.ineq_rhs[i]);
  }
  for (int i = 0; i < lp.eq_lhs.rows(); ++i) {
    for (int j = 0; j < n0; ++j) coef[j] = lp.eq_lhs(i, j);
    add_le_row(coef, lp.eq_rhs[i]);
    for (int j = 0; j < n0; ++j) coef[j] = -lp.eq_lhs(i, j);
    add_le_row(coef, -lp.eq_rhs[i]);
  }
  for (int j = 0; j < n0; ++j) {
    const double l = lp.lower.empty() ? -kInf : lp.lower[j];
    const double u = lp.upper.empty() ? kInf : lp.upper[j];
    std::fill(coef.begin(), coef.end(), 0.0);
    if (std::isfinite(u)) {
      coef[j] = 1.0;
      add_le_row(coef, u);
      coef[j] = 0.0;
    }
    if (std::isfinite(l) && l < 0.0) {
      coef[j] = -1.0;
      add_le_row(coef, -l);
      coef[j] = 0.0;
    }
  }
  return tr;
}

Vector reconstruct(const std::vector<VarMap>& vars, const Vector& z) {
  Vector x(vars.size(), 0.0);
  for (std::size_t j = 0; j < vars.size(); ++j) {
    const VarMap& vm = vars[j];
    switch (vm.kind) {
      case VarMap::Kind::Direct:
        x[j] = z[vm.zpos];
        break;
      case VarMap::Kind::Shifted:
        x[j] = z[vm.zpos] + vm.shift;
        break;
      case VarMap::Kind::Split:
        x[j] = z[vm.zpos] - z[vm.zneg];
        break;
    }
  }
  return x;
}

bool verify_feasible(const LinearProgram& lp, const Vector& x,
                     double feas_tol) {
  for (int i = 0; i < lp.ineq_lhs.rows(); ++i)
    if (dot(lp.ineq_lhs.row(i), x) < lp.ineq_rhs[i] - feas_tol) return false;
  for (int i = 0; i < lp.eq_lhs.rows(); ++i)
    if (std::fabs(dot(lp.eq_lhs.row(i), x) - lp.eq_rhs[i]) > feas_tol)
      return false;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (!lp.lower.empty() && x[j] < lp.lower[j] - feas_tol) return false;
    if (!lp.upper.empty() && x[j] > lp.upper[j] + feas_tol) return false;
  }
  return true;
}

Canonical dual_of(const Canonical& c) {
  Canonical d;
  d.n = c.m();
  d.obj.resize(d.n);
  for (int i = 0; i < d.n; ++i) d.obj[i] = -c.rhs[i];
  d.rows.assign(c.n, Vector(d.n, 0.0));
  d.rhs.resize(c.n);
  for (int j = 0; j < c.n; ++j) {
    for (int i = 0; i < c.m(); ++i) d.rows[j][i] = -c.rows[i][j];
    d.rhs[j] = -c.obj[j];
  }
  return d;
}

void validate_shapes(const LinearProgram& lp) {
  const int n0 = lp.num_vars();
  if (!lp.ineq_lhs.empty() && lp.ineq_lhs.cols() != n0)
    throw ShapeMismatch("ineq_lhs column count");
  if (lp.ineq_lhs.rows() != static_cast<int>(lp.ineq_rhs.size()))
    throw ShapeMismatch("ineq_rhs length");
  if (!lp.eq_lhs.empty() && lp.eq_lhs.cols() != n0)
    throw ShapeMismatch("eq_lhs column count");
  if (lp.eq_lhs.rows() != static_cast<int>(lp.eq_rhs.size()))
    throw ShapeMismatch("eq_rhs length");
  if (!lp.lower.empty() && lp.lower.size() != static_cast<std::size_t>(n0))
    throw ShapeMismatch("lower bound length");
  if (!lp.upper.empty() && lp.upper.size() != static_cast<std::size_t>(n0))
    throw ShapeMismatch("upper bound length");
  for (double v : lp.objective)
    if (!std::isfinite(v)) throw NonFiniteValue("objective entry");
  for (double v : lp.ineq_rhs)
    if (!std::isfinite(v)) throw NonFiniteValue("ineq_rhs entry");
  for (double v : lp.eq_rhs)
    if (!std::isfinite(v)) throw NonFiniteValue("eq_rhs entry");
}

}  // namespace

LpOutcome solve_lp(const LinearProgram& lp, double feas_tol) {
  if (feas_tol <= 0.0) throw Error("solve_lp: feas_tol must be positive");
  validate_shapes(lp);

  LpOutcome out;
  Translation tr = translate(lp, feas_tol);
  if (tr.infeasible_box) {
    out.status = LpStatus::Infeasible;
    out.value = -kInf;
    return out;
  }

  const Canonical& c = tr.canon;
  const long cap = 50L * (c.n + c.m());

  auto finish_optimal = [&](const Vector& z) -> bool {
    Vector x = reconstruct(tr.vars, z);
    if (!verify_feasible(lp, x, feas_tol)) return false;
    out.status = LpStatus::Optimal;
    out.value = dot(lp.objective, x);
    out.x = std::move(x);
    return true;
  };

  // Tall problems are solved through the dual, whose multipliers are the
  // primal optimizer.
  if (c.m() > 4 * std::max(1, c.n)) {
    Canonical d = dual_of(c);
    const long dual_cap = 50L * (d.n + d.m());
    CanonicalOutcome dres = simplex_solve(d, dual_cap);
    if (dres.status == LpStatus::Unbounded) {
      out.status = LpStatus::Infeasible;
      out.value = -kInf;
      return out;
    }
    if (dres.status == LpStatus::Optimal && finish_optimal(dres.duals))
      return out;
    // Dual infeasible (primal unbounded or infeasible) or the recovered
    // point failed verification: fall through to the primal tableau.
  }

  CanonicalOutcome res = simplex_solve(c, cap);
  switch (res.status) {
    case LpStatus::Infeasible:
      out.status = LpStatus::Infeasible;
      out.value = -kInf;
      return out;
    case LpStatus::Unbounded:
      out.status = LpStatus::Unbounded;
      out.value = kInf;
      return out;
    case LpStatus::Optimal:
      if (!finish_optimal(res.x))
        throw LpFailure("optimal point failed feasibility verification");
      return out;
  }
  throw LpFailure("unreachable");
}

}  // namespace nmfid
