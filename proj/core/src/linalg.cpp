// Copyright 2026 nmfid contributors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include "nmfid/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "nmfid/errors.hpp"

namespace nmfid {

LuFactors lu_factor(Matrix a) {
  if (a.rows() != a.cols()) throw ShapeMismatch("lu_factor needs square input");
  const int n = a.rows();
  LuFactors f;
  f.perm.resize(n);
  for (int i = 0; i < n; ++i) f.perm[i] = i;

  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::fabs(a(k, k));
    for (int i = k + 1; i < n; ++i) {
      const double v = std::fabs(a(i, k));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best == 0.0) {
      f.singular = true;
      continue;
    }
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(f.perm[k], f.perm[piv]);
      f.sign = -f.sign;
    }
    const double pivot = a(k, k);
    for (int i = k + 1; i < n; ++i) {
      const double m = a(i, k) / pivot;
      a(i, k) = m;
      if (m == 0.0) continue;
      for (int j = k + 1; j < n; ++j) a(i, j) -= m * a(k, j);
    }
  }
  f.lu = std::move(a);
  return f;
}

Vector lu_solve(const LuFactors& f, std::span<const double> b) {
  const int n = f.lu.rows();
  if (f.singular) throw RankDeficient("lu_solve on singular factorization");
  if (b.size() != static_cast<std::size_t>(n))
    throw ShapeMismatch("lu_solve rhs length");
  Vector y(n);
  for (int i = 0; i < n; ++i) {
    double s = b[f.perm[i]];
    for (int j = 0; j < i; ++j) s -= f.lu(i, j) * y[j];
    y[i] = s;
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = y[i];
    for (int j = i + 1; j < n; ++j) s -= f.lu(i, j) * y[j];
    y[i] = s / f.lu(i, i);
  }
  return y;
}

double determinant(const Matrix& q) {
  if (q.rows() != q.cols()) throw ShapeMismatch("determinant needs square input");
  if (q.rows() == 0) return 1.0;
  LuFactors f = lu_factor(q);
  if (f.singular) return 0.0;
  double d = f.sign;
  for (int i = 0; i < q.rows(); ++i) d *= f.lu(i, i);
  return d;
}

Matrix inverse(const Matrix& a) {
  const int n = a.rows();
  LuFactors f = lu_factor(a);
  if (f.singular) throw RankDeficient("matrix is singular");
  Matrix inv(n, n);
  Vector e(n, 0.0);
  for (int j = 0; j < n; ++j) {
    e[j] = 1.0;
    Vector x = lu_solve(f, e);
    inv.set_col(j, x);
    e[j] = 0.0;
  }
  return inv;
}

Vector cofactor_vector(const Matrix& q, int k) {
  if (q.rows() != q.cols()) throw ShapeMismatch("cofactor_vector: square input");
  const int r = q.rows();
  if (k < 0 || k >= r) throw ShapeMismatch("cofactor_vector: index out of range");
  Vector p(r);
  if (r == 1) {
    p[0] = 1.0;
    return p;
  }
  Matrix minor(r - 1, r - 1);
  for (int j = 0; j < r; ++j) {
    int mi = 0;
    for (int i = 0; i < r; ++i) {
      if (i == k) continue;
      int mj = 0;
      for (int c = 0; c < r; ++c) {
        if (c == j) continue;
        minor(mi, mj++) = q(i, c);
      }
      ++mi;
    }
    const double sign = ((k + j) % 2 == 0) ? 1.0 : -1.0;
    p[j] = sign * determinant(minor);
  }
  return p;
}

double gram_det(const Matrix& w) {
  if (w.rows() < w.cols())
    throw ShapeMismatch("gram_det: fewer rows than columns");
  const double d = determinant(multiply_at_b(w, w));
  return d < 0.0 ? 0.0 : d;
}

int numeric_rank(Matrix a, double rel_tol) {
  const int m = a.rows(), n = a.cols();
  const double scale = max_abs(a);
  if (scale == 0.0) return 0;
  const double thresh = rel_tol * scale;
  int rank = 0;
  int row = 0;
  for (int col = 0; col < n && row < m; ++col) {
    int piv = -1;
    double best = thresh;
    for (int i = row; i < m; ++i) {
      const double v = std::fabs(a(i, col));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (piv < 0) continue;
    if (piv != row)
      for (int j = 0; j < n; ++j) std::swap(a(row, j), a(piv, j));
    for (int i = row + 1; i < m; ++i) {
      const double f = a(i, col) / a(row, col);
      if (f == 0.0) continue;
      for (int j = col; j < n; ++j) a(i, j) -= f * a(row, j);
    }
    ++row;
    ++rank;
  }
  return rank;
}

}  // namespace nmfid
