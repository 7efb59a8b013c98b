// Copyright 2026 nmfid contributors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include "nmfid/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "nmfid/errors.hpp"
#include "nmfid/linalg.hpp"
#include "nmfid/rng.hpp"

namespace nmfid {

namespace {

constexpr int kRegenerationBudget = 20;

Matrix uniform_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = u(rng);
  return m;
}

Matrix gaussian_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = g(rng);
  return m;
}

// Zeroes an exact count of entries at uniformly random positions.
void zero_out(Matrix& m, double fraction, std::mt19937_64& rng) {
  const std::size_t total = m.size();
  const std::size_t zeros =
      static_cast<std::size_t>(fraction * static_cast<double>(total));
  std::vector<std::size_t> positions(total);
  std::iota(positions.begin(), positions.end(), std::size_t{0});
  std::shuffle(positions.begin(), positions.end(), rng);
  for (std::size_t k = 0; k < zeros; ++k) m.data()[positions[k]] = 0.0;
}

// Same exact count, but never zeroes a row completely: an all-zero row of H
// would put a zero column into X, which the column-normalizing solvers
// cannot accept. Returns false when that many zeros cannot be placed.
bool zero_out_keep_rows(Matrix& m, double fraction, std::mt19937_64& rng) {
  const std::size_t total = m.size();
  const std::size_t zeros =
      static_cast<std::size_t>(fraction * static_cast<double>(total));
  const std::size_t capacity =
      static_cast<std::size_t>(m.rows()) * (m.cols() - 1);
  if (zeros > capacity) return false;
  std::vector<std::size_t> positions(total);
  std::iota(positions.begin(), positions.end(), std::size_t{0});
  std::shuffle(positions.begin(), positions.end(), rng);
  std::vector<int> alive(m.rows(), m.cols());
  std::size_t placed = 0;
  for (std::size_t pos : positions) {
    if (placed == zeros) break;
    const int row = static_cast<int>(pos / m.cols());
    if (alive[row] <= 1) continue;
    m.data()[pos] = 0.0;
    --alive[row];
    ++placed;
  }
  return placed == zeros;
}

}  // namespace

std::string to_string(GenCase c) {
  switch (c) {
    case GenCase::SparseW:
      return "sparse-w";
    case GenCase::DenseW:
      return "dense-w";
    case GenCase::GaussianW:
      return "gaussian-w";
  }
  return "?";
}

GenCase gen_case_from_string(const std::string& s) {
  if (s == "sparse-w") return GenCase::SparseW;
  if (s == "dense-w") return GenCase::DenseW;
  if (s == "gaussian-w") return GenCase::GaussianW;
  throw Error("unknown case: " + s);
}

Instance generate(const GenSpec& spec) {
  if (spec.sparsity < 0.0 || spec.sparsity >= 1.0)
    throw Error("generate: sparsity must be in [0, 1)");
  if (spec.r < 1 || spec.r > std::min(spec.m, spec.n))
    throw Error("generate: rank outside [1, min(m, n)]");
  if (spec.rho <= 0.0) throw Error("generate: rho must be positive");

  for (int attempt = 0; attempt < kRegenerationBudget; ++attempt) {
    std::mt19937_64 rng_w =
        make_rng(substream_seed(spec.seed, "gen-w", attempt));
    std::mt19937_64 rng_h =
        make_rng(substream_seed(spec.seed, "gen-h", attempt));

    Matrix w;
    switch (spec.kind) {
      case GenCase::SparseW:
        w = uniform_matrix(spec.m, spec.r, rng_w);
        zero_out(w, spec.sparsity, rng_w);
        break;
      case GenCase::DenseW:
        w = uniform_matrix(spec.m, spec.r, rng_w);
        break;
      case GenCase::GaussianW:
        w = gaussian_matrix(spec.m, spec.r, rng_w);
        break;
    }
    Matrix h = uniform_matrix(spec.n, spec.r, rng_h);
    if (!zero_out_keep_rows(h, spec.sparsity, rng_h)) continue;

    // Rescale H columns to sum rho, countering in W so X is unchanged in law.
    bool degenerate = false;
    for (int k = 0; k < spec.r; ++k) {
      const double colsum = sum(h.col(k));
      if (colsum <= 1e-12) {
        degenerate = true;
        break;
      }
      const double fh = spec.rho / colsum;
      for (int i = 0; i < spec.n; ++i) h(i, k) *= fh;
      for (int i = 0; i < spec.m; ++i) w(i, k) /= fh;
    }
    if (degenerate) continue;

    if (numeric_rank(w, 1e-10) < spec.r || numeric_rank(h, 1e-10) < spec.r)
      continue;

    Instance inst;
    inst.spec = spec;
    inst.regenerations = attempt;

    if (spec.certify == CertifyMode::Exact) {
      inst.h_report = check_sufficiently_scattered(h);
      if (spec.kind == GenCase::SparseW)
        inst.w_report = check_sufficiently_scattered(w);
    } else if (spec.certify == CertifyMode::Sampling) {
      inst.h_report = refute_by_sampling(
          h, spec.certify_samples, substream_seed(spec.seed, "certify-h", attempt));
      if (spec.kind == GenCase::SparseW)
        inst.w_report = refute_by_sampling(
            w, spec.certify_samples,
            substream_seed(spec.seed, "certify-w", attempt));
    }
    const bool h_refuted =
        inst.h_report && inst.h_report->scattered == Scattered::No;
    const bool w_refuted =
        inst.w_report && inst.w_report->scattered == Scattered::No;
    if (h_refuted || w_refuted) continue;

    inst.x = multiply_a_bt(w, h);
    inst.w_true = std::move(w);
    inst.h_true = std::move(h);
    return inst;
  }
  throw CertifyBudgetExceeded(
      "generate: no valid instance within the regeneration budget");
}

std::vector<int> hungarian(const Matrix& cost) {
  if (cost.rows() != cost.cols())
    throw ShapeMismatch("hungarian: square cost matrix required");
  const int n = cost.rows();
  // Potentials-based O(n³) assignment with a virtual zero row/column.
  const double inf = std::numeric_limits<double>::infinity();
  Vector u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0);  // p[j] = row assigned to column j (1-based)
  std::vector<int> way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    Vector minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = -1;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> match(n, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j] >= 1) match[p[j] - 1] = j - 1;
  return match;
}

double mse(const Matrix& h_est, const Matrix& h_ref) {
  if (h_est.rows() != h_ref.rows() || h_est.cols() != h_ref.cols())
    throw ShapeMismatch("mse: operand shapes differ");
  const int r = h_ref.cols();

  auto normalized_cols = [](const Matrix& m) {
    std::vector<Vector> cols;
    for (int j = 0; j < m.cols(); ++j) {
      Vector c = m.col(j);
      const double n = norm2(c);
      if (n == 0.0) throw ZeroColumn("mse: zero column");
      for (double& e : c) e /= n;
      cols.push_back(std::move(c));
    }
    return cols;
  };
  const std::vector<Vector> ref = normalized_cols(h_ref);
  const std::vector<Vector> est = normalized_cols(h_est);

  Matrix cost(r, r);
  for (int k = 0; k < r; ++k) {
    for (int j = 0; j < r; ++j) {
      double d2 = 0.0;
      for (std::size_t i = 0; i < ref[k].size(); ++i) {
        const double d = ref[k][i] - est[j][i];
        d2 += d * d;
      }
      cost(k, j) = d2;
    }
  }
  const std::vector<int> match = hungarian(cost);
  double total = 0.0;
  for (int k = 0; k < r; ++k) total += cost(k, match[k]);
  return total / r;
}

}  // namespace nmfid
