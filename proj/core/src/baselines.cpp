// Copyright 2026 nmfid contributors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include "nmfid/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nmfid/errors.hpp"
#include "nmfid/linalg.hpp"
#include "nmfid/linprog.hpp"
#include "nmfid/rng.hpp"
#include "nmfid/svd.hpp"

namespace nmfid {

namespace {

constexpr double kDetFloor = 1e-12;  // keeps the MVES iterate invertible

double fit_objective(const Matrix& x, const Matrix& w, const Matrix& h) {
  // Direct residual sum of squares; the trace identity loses accuracy to
  // cancellation once the fit is tight.
  double obj = 0.0;
  for (int i = 0; i < x.rows(); ++i) {
    for (int j = 0; j < x.cols(); ++j) {
      double v = x(i, j);
      for (int k = 0; k < w.cols(); ++k) v -= w(i, k) * h(j, k);
      obj += v * v;
    }
  }
  return obj;
}

Matrix uniform_init(int rows, int cols, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = u(rng);
  return m;
}

void fill_residuals(SolverResult& result, const Matrix& x) {
  const double xnorm = frobenius_norm(x);
  result.residuals.reconstruction =
      xnorm == 0.0
          ? 0.0
          : frobenius_norm(x - multiply_a_bt(result.w, result.h)) / xnorm;
  result.residuals.min_h_entry = result.h.empty() ? 0.0 : min_entry(result.h);
}

}  // namespace

SolverResult solve_plain_nmf(const Matrix& x_in, int rank,
                             const BaselineOptions& options) {
  SolverResult result;
  Matrix x = x_in;
  if (min_entry(x) < 0.0) {
    if (!options.clip_negative_input)
      throw NegativeData("plain NMF requires nonnegative data");
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x.data()[i] < 0.0) x.data()[i] = 0.0;
    result.flags.push_back("clipped_input");
  }
  const int m = x.rows(), n = x.cols(), r = rank;
  if (r < 1 || r > std::min(m, n)) throw ShapeMismatch("rank out of range");

  std::mt19937_64 rng_w = make_rng(substream_seed(options.seed, "hals-w"));
  std::mt19937_64 rng_h = make_rng(substream_seed(options.seed, "hals-h"));
  Matrix w = options.init_w.empty() ? uniform_init(m, r, rng_w) : options.init_w;
  Matrix h = options.init_h.empty() ? uniform_init(n, r, rng_h) : options.init_h;
  if (w.rows() != m || w.cols() != r || h.rows() != n || h.cols() != r)
    throw ShapeMismatch("warm start shape");

  // One least-squares scalar on W aligns the initial scale with the data.
  {
    double num = 0.0, den = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) {
        double v = 0.0;
        for (int k = 0; k < r; ++k) v += w(i, k) * h(j, k);
        num += x(i, j) * v;
        den += v * v;
      }
    if (den > 0.0 && num > 0.0) {
      const double alpha = num / den;
      for (std::size_t i = 0; i < w.size(); ++i) w.data()[i] *= alpha;
    }
  }

  const double xf = frobenius_norm(x);
  const double noise_floor = 1e-28 * xf * xf;
  double prev = 0.0;
  for (int iter = 1; iter <= options.max_iters; ++iter) {
    // H columns, then W columns; each column update is the exact
    // nonnegative least-squares minimizer, so the objective cannot rise.
    {
      Matrix gram = multiply_at_b(w, w);  // r×r
      Matrix xtw = multiply_at_b(x, w);   // N×r
      double trace = 0.0;
      for (int k = 0; k < r; ++k) trace += gram(k, k);
      for (int k = 0; k < r; ++k) {
        const double denom = gram(k, k);
        if (denom <= 1e-12 * trace) continue;
        for (int i = 0; i < n; ++i) {
          double acc = xtw(i, k);
          for (int j = 0; j < r; ++j) acc -= h(i, j) * gram(j, k);
          const double v = h(i, k) + acc / denom;
          h(i, k) = v > 0.0 ? v : 0.0;
        }
      }
    }
    {
      Matrix gram = multiply_at_b(h, h);
      Matrix xh = x * h;  // M×r
      double trace = 0.0;
      for (int k = 0; k < r; ++k) trace += gram(k, k);
      for (int k = 0; k < r; ++k) {
        const double denom = gram(k, k);
        if (denom <= 1e-12 * trace) continue;
        for (int i = 0; i < m; ++i) {
          double acc = xh(i, k);
          for (int j = 0; j < r; ++j) acc -= w(i, j) * gram(j, k);
          const double v = w(i, k) + acc / denom;
          w(i, k) = v > 0.0 ? v : 0.0;
        }
      }
    }

    const double obj = fit_objective(x, w, h);
    result.objective_trace.push_back(obj);
    result.sweeps = iter;
    if (obj <= noise_floor ||
        (iter >= 2 && std::fabs(obj - prev) <=
                          options.rel_tol * prev + noise_floor)) {
      result.converged = true;
      break;
    }
    prev = obj;
  }
  if (!result.converged) result.flags.push_back("not_converged");

  result.w = std::move(w);
  result.h = std::move(h);
  fill_residuals(result, x_in);
  result.residuals.max_colsum_dev = 0.0;
  return result;
}

Vector project_simplex(std::span<const double> v, double rho) {
  if (rho <= 0.0) throw Error("project_simplex: rho must be positive");
  Vector u(v.begin(), v.end());
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cumsum = 0.0;
  double theta = 0.0;
  int support = 0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cumsum += u[j];
    const double candidate = (cumsum - rho) / static_cast<double>(j + 1);
    if (u[j] - candidate > 0.0) {
      theta = candidate;
      support = static_cast<int>(j + 1);
    }
  }
  if (support == 0) theta = (cumsum - rho) / static_cast<double>(u.size());
  Vector out(v.size());
  for (std::size_t j = 0; j < v.size(); ++j)
    out[j] = std::max(v[j] - theta, 0.0);
  return out;
}

namespace {

// Affine data of one barycentric numerator as a function of vertex i:
// value(v) = constant + coef·v.
struct AffineForm {
  double constant = 0.0;
  Vector coef;
};

// det of `delta` with column `col` free: cofactors along that column give
// the affine coefficients (they ignore the column's current contents).
AffineForm det_affine_in_column(const Matrix& delta, int col) {
  const int r = delta.rows();
  Vector cof = cofactor_vector(transpose(delta), col);
  AffineForm f;
  f.coef.assign(cof.begin(), cof.begin() + (r - 1));
  f.constant = cof[r - 1];  // multiplies the fixed homogeneous 1
  return f;
}

}  // namespace

SolverResult solve_volmin_mves(const Matrix& x, int rank,
                               const BaselineOptions& options) {
  const int m = x.rows(), n = x.cols(), r = rank;
  if (r < 1 || r > std::min(m, n)) throw ShapeMismatch("rank out of range");

  SolverResult result;

  // 1) ℓ₁-normalize columns.
  Vector colnorm(n);
  double max_norm = 0.0;
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    for (int i = 0; i < m; ++i) s += std::fabs(x(i, j));
    colnorm[j] = s;
    max_norm = std::max(max_norm, s);
  }
  for (int j = 0; j < n; ++j)
    if (colnorm[j] < 1e-12 * max_norm)
      throw ZeroColumn("volmin: data column with (near-)zero l1 norm");
  Matrix xn(m, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < m; ++i) xn(i, j) = x(i, j) / colnorm[j];

  if (r == 1) {
    // Single vertex: all normalized columns coincide at it.
    Matrix w(m, 1);
    for (int i = 0; i < m; ++i) w(i, 0) = sum(xn.row(i)) / n;
    Matrix h(n, 1);
    for (int j = 0; j < n; ++j) h(j, 0) = colnorm[j];
    result.w = std::move(w);
    result.h = std::move(h);
    result.converged = true;
    result.sweeps = 0;
    fill_residuals(result, x);
    return result;
  }

  // 2) Affine reduction: basis from the top r−1 singular directions of the
  // centered cloud; alpha = Σ Vᵀ are the reduced coordinates.
  Vector d(m, 0.0);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < m; ++i) d[i] += xn(i, j) / n;
  Matrix centered(m, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < m; ++i) centered(i, j) = xn(i, j) - d[i];
  ReducedModel red =
      svd_reduce(centered, r - 1, {options.rank_tol, /*strict=*/false});
  if (!red.rank_ok) result.flags.push_back("affine_rank_residual");
  const int q = r - 1;  // reduced dimension
  Matrix alpha(q, n);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < n; ++j) alpha(i, j) = red.sigma[i] * red.xtilde(i, j);

  // 3) Initial vertices: successive projection on the lifted coordinates,
  // inflated around the centroid until every point is enclosed.
  std::vector<int> picks;
  {
    Matrix lifted(q + 1, n);
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < q; ++i) lifted(i, j) = alpha(i, j);
      lifted(q, j) = 1.0;
    }
    std::vector<Vector> cols(n);
    for (int j = 0; j < n; ++j) cols[j] = lifted.col(j);
    for (int t = 0; t < r; ++t) {
      int arg = -1;
      double best = 0.0;
      for (int j = 0; j < n; ++j) {
        const double nsq = dot(cols[j], cols[j]);
        if (nsq > best * (1.0 + 1e-15)) {
          best = nsq;
          arg = j;
        }
      }
      if (arg < 0 || best <= 1e-24)
        throw InitSingular("volmin: degenerate reduced data");
      picks.push_back(arg);
      Vector u = scaled(cols[arg], 1.0 / std::sqrt(best));
      for (int j = 0; j < n; ++j) {
        const double proj = dot(u, cols[j]);
        for (int dd = 0; dd <= q; ++dd) cols[j][dd] -= proj * u[dd];
      }
    }
  }
  Matrix vertices(q, r);  // column j = vertex j
  for (int j = 0; j < r; ++j)
    for (int i = 0; i < q; ++i) vertices(i, j) = alpha(i, picks[j]);
  {
    Vector centroid(q, 0.0);
    for (int j = 0; j < r; ++j)
      for (int i = 0; i < q; ++i) centroid[i] += vertices(i, j) / r;
    double inflate = 1.0 + options.mves_inflation;
    for (int grow = 0; grow < 80; ++grow) {
      Matrix trial(q, r);
      for (int j = 0; j < r; ++j)
        for (int i = 0; i < q; ++i)
          trial(i, j) = centroid[i] + inflate * (vertices(i, j) - centroid[i]);
      // containment check
      Matrix delta(r, r);
      for (int j = 0; j < r; ++j) {
        for (int i = 0; i < q; ++i) delta(i, j) = trial(i, j);
        delta(q, j) = 1.0;
      }
      LuFactors f = lu_factor(delta);
      if (!f.singular) {
        double min_bary = 0.0;
        Vector rhs(r);
        for (int jn = 0; jn < n; ++jn) {
          for (int i = 0; i < q; ++i) rhs[i] = alpha(i, jn);
          rhs[q] = 1.0;
          Vector bary = lu_solve(f, rhs);
          for (double b : bary) min_bary = std::min(min_bary, b);
        }
        if (min_bary >= -options.feas_tol) {
          vertices = std::move(trial);
          break;
        }
      }
      inflate *= 2.0;
      if (grow == 79)
        throw LpFailure("volmin: no enclosing starting simplex found");
    }
  }

  // 4) Cyclic vertex updates. With all vertices but one fixed, det(Δ) and
  // every containment numerator are affine in the free vertex, so each sign
  // branch is one LP; the feasible branch with smaller |det| wins.
  auto build_delta = [&](const Matrix& verts) {
    Matrix delta(r, r);
    for (int j = 0; j < r; ++j) {
      for (int i = 0; i < q; ++i) delta(i, j) = verts(i, j);
      delta(q, j) = 1.0;
    }
    return delta;
  };

  double prev_det = std::fabs(determinant(build_delta(vertices)));
  bool both_branches_failed = false;
  for (int cycle = 1; cycle <= options.max_iters; ++cycle) {
    for (int vi = 0; vi < r; ++vi) {
      Matrix delta = build_delta(vertices);
      const AffineForm det_form = det_affine_in_column(delta, vi);

      // Containment numerators: det(Δ with column j replaced by the lifted
      // data point), affine in vertex vi for j ≠ vi, constant for j = vi.
      std::vector<AffineForm> rows;
      Vector fixed_signs;  // constants for j = vi
      rows.reserve(static_cast<std::size_t>(n) * (r - 1));
      Matrix replaced = delta;
      for (int j = 0; j < r; ++j) {
        for (int jn = 0; jn < n; ++jn) {
          for (int i = 0; i < q; ++i) replaced(i, j) = alpha(i, jn);
          replaced(q, j) = 1.0;
          if (j == vi) {
            fixed_signs.push_back(determinant(replaced));
          } else {
            rows.push_back(det_affine_in_column(replaced, vi));
          }
        }
        for (int i = 0; i < q; ++i) replaced(i, j) = delta(i, j);
        replaced(q, j) = delta(q, j);
      }

      Vector current_vertex = vertices.col(vi);
      const double current_absdet =
          std::fabs(det_form.constant + dot(det_form.coef, current_vertex));

      double best_absdet = -1.0;
      Vector best_vertex;
      for (const double sign : {1.0, -1.0}) {
        bool constants_ok = true;
        for (double c : fixed_signs) {
          if (sign * c < -options.feas_tol * std::max(1.0, std::fabs(c))) {
            constants_ok = false;
            break;
          }
        }
        if (!constants_ok) continue;

        LinearProgram lp;
        lp.objective = scaled(det_form.coef, -sign);  // minimize sign·det
        lp.ineq_lhs = Matrix(static_cast<int>(rows.size()) + 1, q);
        lp.ineq_rhs.assign(rows.size() + 1, 0.0);
        for (std::size_t ri = 0; ri < rows.size(); ++ri) {
          for (int dd = 0; dd < q; ++dd)
            lp.ineq_lhs(static_cast<int>(ri), dd) = sign * rows[ri].coef[dd];
          lp.ineq_rhs[ri] = -sign * rows[ri].constant;
        }
        const int last = static_cast<int>(rows.size());
        for (int dd = 0; dd < q; ++dd)
          lp.ineq_lhs(last, dd) = sign * det_form.coef[dd];
        lp.ineq_rhs[last] = kDetFloor - sign * det_form.constant;
        lp.lower.assign(q, -options.safeguard_bound);
        lp.upper.assign(q, options.safeguard_bound);

        LpOutcome res = solve_lp(lp, options.feas_tol);
        if (res.status != LpStatus::Optimal) continue;
        const double det_val =
            det_form.constant + dot(det_form.coef, res.x);
        if (best_absdet < 0.0 || std::fabs(det_val) < best_absdet) {
          best_absdet = std::fabs(det_val);
          best_vertex = res.x;
        }
      }
      if (best_absdet < 0.0) {
        both_branches_failed = true;
        continue;  // keep the current vertex
      }
      // Feasibility slack in the branch LP can nudge |det| up by O(tol);
      // keeping the current vertex in that case makes the volume trace
      // exactly non-increasing.
      if (best_absdet > current_absdet) continue;
      for (int i = 0; i < q; ++i) vertices(i, vi) = best_vertex[i];
    }

    const double cur_det = std::fabs(determinant(build_delta(vertices)));
    result.objective_trace.push_back(cur_det);
    result.sweeps = cycle;
    if (cycle >= 2 && cur_det > 0.0 && prev_det > 0.0 &&
        std::fabs(std::log(cur_det) - std::log(prev_det)) <=
            options.rel_tol) {
      result.converged = true;
      break;
    }
    prev_det = cur_det;
  }
  if (both_branches_failed) result.flags.push_back("mves_branch_infeasible");
  if (!result.converged) result.flags.push_back("not_converged");

  // 5) Lift vertices back and read off barycentric coordinates; undoing the
  // column normalization restores the original scale.
  Matrix w(m, r);
  for (int j = 0; j < r; ++j)
    for (int i = 0; i < m; ++i) {
      double v = d[i];
      for (int k = 0; k < q; ++k) v += red.u(i, k) * vertices(k, j);
      w(i, j) = v;
    }
  Matrix h(n, r);
  {
    LuFactors f = lu_factor(build_delta(vertices));
    if (f.singular) throw LpFailure("volmin: final simplex is singular");
    Vector rhs(r);
    for (int jn = 0; jn < n; ++jn) {
      for (int i = 0; i < q; ++i) rhs[i] = alpha(i, jn);
      rhs[q] = 1.0;
      Vector bary = lu_solve(f, rhs);
      for (int j = 0; j < r; ++j) h(jn, j) = bary[j] * colnorm[jn];
    }
  }
  result.w = std::move(w);
  result.h = std::move(h);
  fill_residuals(result, x);
  return result;
}

SolverResult solve_regularized(const Matrix& x, int rank,
                               const BaselineOptions& options) {
  const int m = x.rows(), n = x.cols(), r = rank;
  if (r < 1 || r > std::min(m, n)) throw ShapeMismatch("rank out of range");
  if (options.lambda < 0.0) throw Error("lambda must be nonnegative");

  SolverResult result;
  std::mt19937_64 rng_w = make_rng(substream_seed(options.seed, "reg-w"));
  std::mt19937_64 rng_h = make_rng(substream_seed(options.seed, "reg-h"));
  Matrix w = options.init_w.empty() ? uniform_init(m, r, rng_w) : options.init_w;
  Matrix h = options.init_h.empty() ? uniform_init(n, r, rng_h) : options.init_h;
  if (w.rows() != m || w.cols() != r || h.rows() != n || h.cols() != r)
    throw ShapeMismatch("warm start shape");
  for (int k = 0; k < r; ++k) {
    Vector col = project_simplex(h.col(k), options.rho);
    h.set_col(k, col);
  }

  bool gram_singular = false;
  auto objective = [&](const Matrix& ww, const Matrix& hh) {
    return fit_objective(x, ww, hh) +
           options.lambda * determinant(multiply_at_b(ww, ww));
  };

  const double xf = frobenius_norm(x);
  const double noise_floor = 1e-28 * xf * xf;
  constexpr int kInnerSteps = 10;

  double obj = objective(w, h);
  double step_w = 0.0, step_h = 0.0;  // 0 = seed from the curvature below
  for (int iter = 1; iter <= options.max_iters; ++iter) {
    // W block: gradient descent with Armijo backtracking on the full
    // objective fit + lambda*det(WtW).
    {
      Matrix gram_h = multiply_at_b(h, h);
      double lips = 0.0;
      for (int k = 0; k < r; ++k) lips += gram_h(k, k);
      if (step_w <= 0.0) step_w = lips > 0.0 ? 1.0 / (2.0 * lips) : 1.0;
      for (int inner = 0; inner < kInnerSteps; ++inner) {
        Matrix residual = x - multiply_a_bt(w, h);
        Matrix grad = -2.0 * (residual * h);
        if (options.lambda > 0.0) {
          Matrix gram = multiply_at_b(w, w);
          const double detg = determinant(gram);
          if (detg < 1e-300) {
            gram_singular = true;  // skip the det term this step
          } else {
            Matrix winv = w * inverse(gram);
            grad = grad + (2.0 * options.lambda * detg) * winv;
          }
        }
        const double gnorm = frobenius_norm(grad);
        if (gnorm * gnorm <= noise_floor) break;
        double t = step_w * 2.0;
        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
          Matrix trial = w - t * grad;
          const double trial_obj = objective(trial, h);
          if (trial_obj <= obj - 1e-4 * t * gnorm * gnorm) {
            w = std::move(trial);
            obj = trial_obj;
            step_w = t;
            accepted = true;
            break;
          }
          t *= 0.5;
        }
        if (!accepted) {
          step_w = std::max(step_w * 0.25, 1e-300);
          break;
        }
      }
    }
    // H block: projected gradient on the fit term, columns projected onto
    // the rho-simplex.
    {
      Matrix gram = multiply_at_b(w, w);
      Matrix xtw = multiply_at_b(x, w);
      double lips = 0.0;
      for (int k = 0; k < r; ++k) lips += gram(k, k);
      if (step_h <= 0.0) step_h = lips > 0.0 ? 1.0 / (2.0 * lips) : 1.0;
      for (int inner = 0; inner < kInnerSteps; ++inner) {
        Matrix grad(n, r);  // 2(H WtW - Xt W)
        for (int i = 0; i < n; ++i)
          for (int k = 0; k < r; ++k) {
            double v = -xtw(i, k);
            for (int j = 0; j < r; ++j) v += h(i, j) * gram(j, k);
            grad(i, k) = 2.0 * v;
          }
        double t = step_h * 2.0;
        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
          Matrix trial = h;
          for (int k = 0; k < r; ++k) {
            Vector col(n);
            for (int i = 0; i < n; ++i) col[i] = h(i, k) - t * grad(i, k);
            Vector proj = project_simplex(col, options.rho);
            trial.set_col(k, proj);
          }
          const double trial_obj = objective(w, trial);
          if (trial_obj <= obj) {
            const bool progress = obj - trial_obj > noise_floor;
            h = std::move(trial);
            obj = trial_obj;
            step_h = t;
            accepted = progress;
            break;
          }
          t *= 0.5;
        }
        if (!accepted) {
          step_h = std::max(step_h * 0.25, 1e-300);
          break;
        }
      }
    }

    result.objective_trace.push_back(obj);
    result.sweeps = iter;
    if (obj <= noise_floor) {
      result.converged = true;
      break;
    }
    if (iter >= 2) {
      const double prev = result.objective_trace[iter - 2];
      if (std::fabs(obj - prev) <= options.rel_tol * prev + noise_floor) {
        result.converged = true;
        break;
      }
    }
  }
  if (gram_singular) result.flags.push_back("gram_singular");
  if (!result.converged) result.flags.push_back("not_converged");

  result.w = std::move(w);
  result.h = std::move(h);
  fill_residuals(result, x);
  double dev = 0.0;
  for (int k = 0; k < r; ++k)
    dev = std::max(dev, std::fabs(sum(result.h.col(k)) - options.rho));
  result.residuals.max_colsum_dev = dev;
  return result;
}

}  // namespace nmfid
