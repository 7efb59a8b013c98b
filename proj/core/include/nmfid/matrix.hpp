// Copyright 2026 nmfid contributors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <cassert>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace nmfid {

using Vector = std::vector<double>;

/// Dense real matrix, row-major storage. Constructors that take entries
/// reject NaN and infinities.
class Matrix {
 public:
  Matrix() = default;

  /// Zero-filled rows×cols matrix.
  Matrix(int rows, int cols);

  /// Takes ownership of `entries` (row-major, length rows*cols).
  Matrix(int rows, int cols, Vector entries);

  /// Row-major construction from nested braces: Matrix{{1,2},{3,4}}.
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }
  std::size_t size() const { return entries_.size(); }

  double& operator()(int i, int j) {
    assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
    return entries_[static_cast<std::size_t>(i) * cols_ + j];
  }
  double operator()(int i, int j) const {
    assert(i >= 0 && i < rows_ && j >= 0 && j < cols_);
    return entries_[static_cast<std::size_t>(i) * cols_ + j];
  }

  std::span<const double> row(int i) const {
    assert(i >= 0 && i < rows_);
    return {entries_.data() + static_cast<std::size_t>(i) * cols_,
            static_cast<std::size_t>(cols_)};
  }
  std::span<double> row(int i) {
    assert(i >= 0 && i < rows_);
    return {entries_.data() + static_cast<std::size_t>(i) * cols_,
            static_cast<std::size_t>(cols_)};
  }

  Vector col(int j) const;
  void set_col(int j, std::span<const double> v);
  void set_row(int i, std::span<const double> v);

  const Vector& entries() const { return entries_; }
  double* data() { return entries_.data(); }
  const double* data() const { return entries_.data(); }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  Vector entries_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);

Matrix transpose(const Matrix& a);
/// AᵀB without forming the transpose.
Matrix multiply_at_b(const Matrix& a, const Matrix& b);
/// ABᵀ without forming the transpose.
Matrix multiply_a_bt(const Matrix& a, const Matrix& b);

Vector matvec(const Matrix& a, std::span<const double> x);
/// Aᵀx.
Vector tmatvec(const Matrix& a, std::span<const double> x);

double frobenius_norm(const Matrix& a);
double max_abs(const Matrix& a);
double min_entry(const Matrix& a);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double sum(std::span<const double> a);
Vector scaled(std::span<const double> a, double s);

}  // namespace nmfid
