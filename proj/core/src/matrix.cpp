// Copyright 2026 nmfid contributors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include "nmfid/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nmfid/errors.hpp"

namespace nmfid {

namespace {

void require_shape(bool ok, const char* what) {
  if (!ok) throw ShapeMismatch(what);
}

void require_finite(const Vector& entries) {
  for (double v : entries) {
    if (!std::isfinite(v)) throw NonFiniteValue("matrix entry is not finite");
  }
}

}  // namespace

Matrix::Matrix(int rows, int cols) : rows_(rows), cols_(cols) {
  require_shape(rows >= 0 && cols >= 0, "negative matrix dimension");
  entries_.assign(static_cast<std::size_t>(rows) * cols, 0.0);
}

Matrix::Matrix(int rows, int cols, Vector entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  require_shape(rows >= 0 && cols >= 0, "negative matrix dimension");
  require_shape(entries_.size() == static_cast<std::size_t>(rows) * cols,
                "entry count does not match rows*cols");
  require_finite(entries_);
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = static_cast<int>(rows.size());
  cols_ = rows_ == 0 ? 0 : static_cast<int>(rows.begin()->size());
  entries_.reserve(static_cast<std::size_t>(rows_) * cols_);
  for (const auto& r : rows) {
    require_shape(static_cast<int>(r.size()) == cols_, "ragged initializer");
    entries_.insert(entries_.end(), r.begin(), r.end());
  }
  require_finite(entries_);
}

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Vector Matrix::col(int j) const {
  assert(j >= 0 && j < cols_);
  Vector out(static_cast<std::size_t>(rows_));
  for (int i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

void Matrix::set_col(int j, std::span<const double> v) {
  require_shape(v.size() == static_cast<std::size_t>(rows_), "set_col length");
  for (int i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

void Matrix::set_row(int i, std::span<const double> v) {
  require_shape(v.size() == static_cast<std::size_t>(cols_), "set_row length");
  for (int j = 0; j < cols_; ++j) (*this)(i, j) = v[j];
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  require_shape(a.cols() == b.rows(), "matmul inner dimensions");
  Matrix out(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  require_shape(a.rows() == b.rows() && a.cols() == b.cols(), "matrix add");
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i)
    out.data()[i] = a.data()[i] + b.data()[i];
  return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  require_shape(a.rows() == b.rows() && a.cols() == b.cols(), "matrix sub");
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i)
    out.data()[i] = a.data()[i] - b.data()[i];
  return out;
}

Matrix operator*(double s, const Matrix& a) {
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) out.data()[i] = s * a.data()[i];
  return out;
}

Matrix transpose(const Matrix& a) {
  Matrix out(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  return out;
}

Matrix multiply_at_b(const Matrix& a, const Matrix& b) {
  require_shape(a.rows() == b.rows(), "AtB inner dimensions");
  Matrix out(a.cols(), b.cols());
  for (int k = 0; k < a.rows(); ++k) {
    for (int i = 0; i < a.cols(); ++i) {
      const double aki = a(k, i);
      if (aki == 0.0) continue;
      for (int j = 0; j < b.cols(); ++j) out(i, j) += aki * b(k, j);
    }
  }
  return out;
}

Matrix multiply_a_bt(const Matrix& a, const Matrix& b) {
  require_shape(a.cols() == b.cols(), "ABt inner dimensions");
  Matrix out(a.rows(), b.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < b.rows(); ++j) out(i, j) = dot(a.row(i), b.row(j));
  return out;
}

Vector matvec(const Matrix& a, std::span<const double> x) {
  require_shape(x.size() == static_cast<std::size_t>(a.cols()), "matvec size");
  Vector out(static_cast<std::size_t>(a.rows()));
  for (int i = 0; i < a.rows(); ++i) out[i] = dot(a.row(i), x);
  return out;
}

Vector tmatvec(const Matrix& a, std::span<const double> x) {
  require_shape(x.size() == static_cast<std::size_t>(a.rows()), "tmatvec size");
  Vector out(static_cast<std::size_t>(a.cols()), 0.0);
  for (int i = 0; i < a.rows(); ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    auto r = a.row(i);
    for (int j = 0; j < a.cols(); ++j) out[j] += xi * r[j];
  }
  return out;
}

double frobenius_norm(const Matrix& a) {
  double s = 0.0;
  for (double v : a.entries()) s += v * v;
  return std::sqrt(s);
}

double max_abs(const Matrix& a) {
  double m = 0.0;
  for (double v : a.entries()) m = std::max(m, std::fabs(v));
  return m;
}

double min_entry(const Matrix& a) {
  double m = a.size() == 0 ? 0.0 : a.entries()[0];
  for (double v : a.entries()) m = std::min(m, v);
  return m;
}

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double sum(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += v;
  return s;
}

Vector scaled(std::span<const double> a, double s) {
  Vector out(a.begin(), a.end());
  for (double& v : out) v *= s;
  return out;
}

}  // namespace nmfid
