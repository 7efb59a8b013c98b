// Copyright 2026 nmfid contributors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include <doctest.h>

#include <cmath>
#include <limits>

#include "nmfid/errors.hpp"
#include "nmfid/matrix.hpp"

using namespace nmfid;

TEST_CASE("constructors reject non-finite entries") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(Matrix(1, 2, {1.0, nan}), NonFiniteValue);
  CHECK_THROWS_AS(Matrix({{1.0}, {inf}}), NonFiniteValue);
  CHECK_THROWS_AS(Matrix(2, 2, {1.0, 2.0, 3.0}), ShapeMismatch);
}

TEST_CASE("entry count equals rows*cols and storage is row-major") {
  Matrix m{{1, 2, 3}, {4, 5, 6}};
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 3);
  CHECK(m.size() == 6);
  CHECK(m(1, 0) == 4);
  CHECK(m.entries()[3] == 4);
  CHECK(m.row(1)[2] == 6);
}

TEST_CASE("basic operations") {
  Matrix a{{1, 2}, {3, 4}};
  Matrix b{{0, 1}, {1, 0}};
  CHECK((a * b) == Matrix{{2, 1}, {4, 3}});
  CHECK(transpose(a) == Matrix{{1, 3}, {2, 4}});
  CHECK((a + b) == Matrix{{1, 3}, {4, 4}});
  CHECK((a - b) == Matrix{{1, 1}, {2, 4}});
  CHECK((2.0 * a) == Matrix{{2, 4}, {6, 8}});
  CHECK(multiply_at_b(a, b) == transpose(a) * b);
  CHECK(multiply_a_bt(a, b) == a * transpose(b));
  CHECK(frobenius_norm(Matrix{{3, 4}}) == doctest::Approx(5.0));
  CHECK(max_abs(Matrix{{-7, 2}}) == 7.0);
  CHECK(min_entry(Matrix{{-7, 2}}) == -7.0);

  Vector x{1.0, -1.0};
  CHECK(matvec(a, x) == Vector{-1.0, -1.0});
  CHECK(tmatvec(a, x) == Vector{-2.0, -2.0});
}

TEST_CASE("identity and column access") {
  Matrix id = Matrix::identity(3);
  CHECK(id(0, 0) == 1.0);
  CHECK(id(0, 1) == 0.0);
  CHECK(id.col(1) == Vector{0.0, 1.0, 0.0});
  Matrix m(2, 2);
  m.set_col(0, Vector{5.0, 6.0});
  CHECK(m(1, 0) == 6.0);
  m.set_row(0, Vector{7.0, 8.0});
  CHECK(m(0, 1) == 8.0);
}
