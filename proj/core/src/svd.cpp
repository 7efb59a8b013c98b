// Copyright 2026 nmfid contributors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include "nmfid/svd.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nmfid/errors.hpp"

namespace nmfid {

namespace {

constexpr double kOrthTol = 1e-15;
constexpr int kMaxSweeps = 60;

// Orthogonalizes the columns of `work` in place by plane rotations,
// accumulating them into `v`. Hestenes one-sided Jacobi.
void orthogonalize_columns(Matrix& work, Matrix& v) {
  const int m = work.rows();
  const int n = work.cols();
  Vector colsq(n);
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    for (int j = 0; j < n; ++j) colsq[j] = dot(work.col(j), work.col(j));
    bool rotated = false;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double a = colsq[p];
        const double b = colsq[q];
        if (a == 0.0 || b == 0.0) continue;
        double c = 0.0;
        for (int i = 0; i < m; ++i) c += work(i, p) * work(i, q);
        if (std::fabs(c) <= kOrthTol * std::sqrt(a * b)) continue;
        rotated = true;
        const double zeta = (b - a) / (2.0 * c);
        const double t =
            (zeta >= 0.0 ? 1.0 : -1.0) / (std::fabs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = cs * t;
        for (int i = 0; i < m; ++i) {
          const double wp = work(i, p);
          const double wq = work(i, q);
          work(i, p) = cs * wp - sn * wq;
          work(i, q) = sn * wp + cs * wq;
        }
        for (int i = 0; i < v.rows(); ++i) {
          const double vp = v(i, p);
          const double vq = v(i, q);
          v(i, p) = cs * vp - sn * vq;
          v(i, q) = sn * vp + cs * vq;
        }
        colsq[p] = cs * cs * a - 2.0 * cs * sn * c + sn * sn * b;
        colsq[q] = sn * sn * a + 2.0 * cs * sn * c + cs * cs * b;
      }
    }
    if (!rotated) break;
  }
}

void apply_sign_convention(Matrix& u, Matrix& v) {
  for (int j = 0; j < u.cols(); ++j) {
    int arg = 0;
    double best = 0.0;
    for (int i = 0; i < u.rows(); ++i) {
      const double a = std::fabs(u(i, j));
      if (a > best) {
        best = a;
        arg = i;
      }
    }
    if (u(arg, j) < 0.0) {
      for (int i = 0; i < u.rows(); ++i) u(i, j) = -u(i, j);
      for (int i = 0; i < v.rows(); ++i) v(i, j) = -v(i, j);
    }
  }
}

}  // namespace

SvdFactors jacobi_svd(const Matrix& x) {
  if (x.empty()) throw ShapeMismatch("jacobi_svd on empty matrix");
  const bool transposed = x.rows() < x.cols();
  Matrix work = transposed ? transpose(x) : x;
  const int n = work.cols();

  Matrix v = Matrix::identity(n);
  orthogonalize_columns(work, v);

  Vector sigma(n);
  for (int j = 0; j < n; ++j) sigma[j] = norm2(work.col(j));

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return sigma[a] > sigma[b]; });

  Matrix u_sorted(work.rows(), n);
  Matrix v_sorted(n, n);
  Vector sigma_sorted(n);
  for (int j = 0; j < n; ++j) {
    const int src = order[j];
    sigma_sorted[j] = sigma[src];
    if (sigma[src] > 0.0) {
      const double inv = 1.0 / sigma[src];
      for (int i = 0; i < work.rows(); ++i) u_sorted(i, j) = work(i, src) * inv;
    }
    for (int i = 0; i < n; ++i) v_sorted(i, j) = v(i, src);
  }

  SvdFactors out;
  out.sigma = std::move(sigma_sorted);
  if (transposed) {
    out.u = std::move(v_sorted);
    out.v = std::move(u_sorted);
  } else {
    out.u = std::move(u_sorted);
    out.v = std::move(v_sorted);
  }
  apply_sign_convention(out.u, out.v);
  return out;
}

ReducedModel svd_reduce(const Matrix& x, int rank,
                        const SvdReduceOptions& options) {
  const int kmax = std::min(x.rows(), x.cols());
  if (rank < 1 || rank > kmax)
    throw ShapeMismatch("svd_reduce: rank outside [1, min(rows, cols)]");

  SvdFactors f = jacobi_svd(x);
  if (f.sigma[rank - 1] <= 0.0)
    throw RankDeficient("svd_reduce: input rank below requested rank");

  ReducedModel model;
  model.rank_ok =
      rank == kmax || f.sigma[rank] <= options.rank_tol * f.sigma[0];
  if (!model.rank_ok && options.strict)
    throw ResidualAboveTolerance(
        "svd_reduce: trailing singular value exceeds rank_tol * sigma_1");

  model.u = Matrix(x.rows(), rank);
  model.v = Matrix(x.cols(), rank);
  model.sigma.assign(f.sigma.begin(), f.sigma.begin() + rank);
  for (int i = 0; i < x.rows(); ++i)
    for (int j = 0; j < rank; ++j) model.u(i, j) = f.u(i, j);
  for (int i = 0; i < x.cols(); ++i)
    for (int j = 0; j < rank; ++j) model.v(i, j) = f.v(i, j);

  model.xtilde = transpose(model.v);
  model.s.resize(rank);
  for (int i = 0; i < rank; ++i) model.s[i] = sum(model.xtilde.row(i));

  // Direct reconstruction residual (the trailing-sigma identity would hide
  // any loss of orthogonality).
  double res2 = 0.0;
  for (int i = 0; i < x.rows(); ++i) {
    for (int j = 0; j < x.cols(); ++j) {
      double v = x(i, j);
      for (int k = 0; k < rank; ++k)
        v -= model.u(i, k) * model.sigma[k] * model.v(j, k);
      res2 += v * v;
    }
  }
  model.residual = std::sqrt(res2);
  return model;
}

}  // namespace nmfid
