// Copyright 2026 nmfid contributors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include "nmfid/solver.hpp"

#include <algorithm>
#include <cmath>

#include "nmfid/errors.hpp"
#include "nmfid/linalg.hpp"
#include "nmfid/linprog.hpp"
#include "nmfid/rng.hpp"

namespace nmfid {

namespace {

// Constraint set shared by every row subproblem: X̃ᵀq ≥ 0, s·q = rho,
// |q_j| ≤ safeguard box. Only the objective changes per row and branch.
LinearProgram make_row_lp(const ReducedModel& model,
                          const SolverOptions& options) {
  const int r = static_cast<int>(model.sigma.size());
  LinearProgram lp;
  lp.objective.assign(r, 0.0);
  lp.ineq_lhs = transpose(model.xtilde);  // N×r
  lp.ineq_rhs.assign(model.xtilde.cols(), 0.0);
  lp.eq_lhs = Matrix(1, r);
  for (int j = 0; j < r; ++j) lp.eq_lhs(0, j) = model.s[j];
  lp.eq_rhs = {options.rho};
  lp.lower.assign(r, -options.safeguard_bound);
  lp.upper.assign(r, options.safeguard_bound);
  return lp;
}

Vector solve_row(LinearProgram& lp, const Vector& objective,
                 const SolverOptions& options, bool* box_active) {
  lp.objective = objective;
  LpOutcome plus = solve_lp(lp, options.feas_tol);
  if (plus.status != LpStatus::Optimal)
    throw LpFailure("row subproblem is not solvable; data may not admit the model");
  for (double& c : lp.objective) c = -c;
  LpOutcome minus = solve_lp(lp, options.feas_tol);
  if (minus.status != LpStatus::Optimal)
    throw LpFailure("row subproblem is not solvable; data may not admit the model");

  // Ties go to the +p branch for reproducibility.
  const Vector& pick =
      std::fabs(plus.value) >= std::fabs(minus.value) ? plus.x : minus.x;
  if (box_active) {
    for (double v : pick)
      if (std::fabs(v) >= options.safeguard_bound * (1.0 - 1e-9))
        *box_active = true;
  }
  return pick;
}

Vector random_feasible_row(LinearProgram& lp, const SolverOptions& options,
                           std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector objective(lp.num_vars());
  for (double& v : objective) v = gauss(rng);
  return solve_row(lp, objective, options, nullptr);
}

double abs_det(const Matrix& q) { return std::fabs(determinant(q)); }

}  // namespace

Matrix init_q(const ReducedModel& model, const SolverOptions& options) {
  const int r = static_cast<int>(model.sigma.size());
  const int n = model.xtilde.cols();

  if (options.init == InitScheme::RandomFeasible) {
    LinearProgram lp = make_row_lp(model, options);
    std::mt19937_64 rng =
        make_rng(substream_seed(options.seed, "init-random-feasible"));
    for (int attempt = 0; attempt < 50; ++attempt) {
      Matrix q(r, r);
      for (int k = 0; k < r; ++k)
        q.set_row(k, random_feasible_row(lp, options, rng));
      if (abs_det(q) > 0.0) return q;
    }
    throw InitSingular("random feasible init: rows stayed dependent");
  }

  // Successive projection: repeatedly pick the column with the largest
  // residual norm and deflate against it.
  std::vector<Vector> cols(n);
  for (int j = 0; j < n; ++j) cols[j] = model.xtilde.col(j);
  std::vector<int> selected;
  for (int t = 0; t < r; ++t) {
    int arg = -1;
    double best = 0.0;
    for (int j = 0; j < n; ++j) {
      const double nsq = dot(cols[j], cols[j]);
      if (nsq > best + 1e-15 * best) {
        best = nsq;
        arg = j;
      }
    }
    if (arg < 0 || best <= 1e-24)
      throw InitSingular("successive projection found no independent column");
    selected.push_back(arg);
    Vector u = scaled(cols[arg], 1.0 / std::sqrt(best));
    for (int j = 0; j < n; ++j) {
      const double proj = dot(u, cols[j]);
      for (int d = 0; d < r; ++d) cols[j][d] -= proj * u[d];
    }
  }

  Matrix s_cols(r, r);
  for (int t = 0; t < r; ++t)
    s_cols.set_col(t, model.xtilde.col(selected[t]));
  Matrix q;
  try {
    q = inverse(s_cols);
  } catch (const RankDeficient&) {
    throw InitSingular("selected columns are singular");
  }

  // Rows rescaled onto the equality s·q_k = rho where possible.
  const double s_norm = norm2(model.s);
  for (int k = 0; k < r; ++k) {
    const double d = dot(model.s, q.row(k));
    if (std::fabs(d) > 1e-12 * s_norm * norm2(q.row(k))) {
      const double f = options.rho / d;
      for (int j = 0; j < r; ++j) q(k, j) *= f;
    }
  }
  return q;
}

AoSweepResult ao_sweep(const Matrix& q_in, const ReducedModel& model,
                       const SolverOptions& options) {
  const int r = q_in.rows();
  if (q_in.cols() != r) throw ShapeMismatch("ao_sweep: Q must be square");

  AoSweepResult out;
  out.q = q_in;
  LinearProgram lp = make_row_lp(model, options);
  const double det_before = abs_det(q_in);

  for (int k = 0; k < r; ++k) {
    Vector p = cofactor_vector(out.q, k);
    double pmax = 0.0;
    for (double v : p) pmax = std::max(pmax, std::fabs(v));
    if (pmax <= 1e-250) {
      // Remaining rows are rank-deficient; re-draw this row and continue.
      std::mt19937_64 rng =
          make_rng(substream_seed(options.seed, "reinit-row", k));
      out.q.set_row(k, random_feasible_row(lp, options, rng));
      out.reinitialized = true;
      p = cofactor_vector(out.q, k);
    }
    out.q.set_row(k, solve_row(lp, p, options, &out.box_active));
  }

  const double det_after = abs_det(out.q);
  if (det_before <= 0.0) {
    out.improved = det_after > 0.0;
  } else {
    out.improved =
        std::log(det_after) - std::log(det_before) > options.rel_tol;
  }
  return out;
}

SolverResult solve_proposed(const Matrix& x, int rank,
                            const SolverOptions& options) {
  if (options.rho <= 0.0) throw Error("solve_proposed: rho must be positive");
  const ReducedModel model =
      svd_reduce(x, rank, {options.rank_tol, /*strict=*/true});

  Matrix q = init_q(model, options);

  SolverResult result;
  bool box_active = false;
  bool reinitialized = false;
  for (int sweep = 1; sweep <= options.max_sweeps; ++sweep) {
    AoSweepResult sres = ao_sweep(q, model, options);
    q = std::move(sres.q);
    box_active |= sres.box_active;
    reinitialized |= sres.reinitialized;
    result.objective_trace.push_back(abs_det(q));
    result.sweeps = sweep;
    if (sweep >= 2) {
      const double cur = result.objective_trace[sweep - 1];
      const double prev = result.objective_trace[sweep - 2];
      if (cur > 0.0 && prev > 0.0 &&
          std::fabs(std::log(cur) - std::log(prev)) <= options.rel_tol) {
        result.converged = true;
        break;
      }
    }
  }
  if (box_active) result.flags.push_back("box_active");
  if (reinitialized) result.flags.push_back("degenerate_cofactor_reinit");
  if (!result.converged) result.flags.push_back("not_converged");

  // Recover H = (QX̃)ᵀ and W = U diag(Σ) Q⁻¹.
  const int r = rank;
  const int n = model.xtilde.cols();
  Matrix h(n, r);
  double min_h = 0.0;
  {
    Matrix qx = q * model.xtilde;  // r×N
    for (int k = 0; k < r; ++k)
      for (int j = 0; j < n; ++j) {
        double v = qx(k, j);
        min_h = std::min(min_h, v);
        if (options.clip_negatives && v < 0.0 && v >= -options.feas_tol)
          v = 0.0;
        h(j, k) = v;
      }
  }
  Matrix qinv = inverse(q);
  Matrix w(x.rows(), r);
  for (int i = 0; i < x.rows(); ++i)
    for (int j = 0; j < r; ++j) {
      double v = 0.0;
      for (int k = 0; k < r; ++k)
        v += model.u(i, k) * model.sigma[k] * qinv(k, j);
      w(i, j) = v;
    }

  result.residuals.min_h_entry = min_h;
  double colsum_dev = 0.0;
  for (int k = 0; k < r; ++k)
    colsum_dev = std::max(colsum_dev,
                          std::fabs(sum(h.col(k)) - options.rho));
  result.residuals.max_colsum_dev = colsum_dev;
  const double xnorm = frobenius_norm(x);
  result.residuals.reconstruction =
      xnorm == 0.0 ? 0.0 : frobenius_norm(x - multiply_a_bt(w, h)) / xnorm;

  result.q = std::move(q);
  result.w = std::move(w);
  result.h = std::move(h);
  return result;
}

}  // namespace nmfid
