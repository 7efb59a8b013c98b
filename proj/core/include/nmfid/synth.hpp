// Copyright 2026 nmfid contributors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "nmfid/geometry.hpp"
#include "nmfid/matrix.hpp"

namespace nmfid {

enum class GenCase { SparseW, DenseW, GaussianW };
enum class CertifyMode { None, Sampling, Exact };

std::string to_string(GenCase c);
GenCase gen_case_from_string(const std::string& s);

struct GenSpec {
  int m = 200;
  int n = 200;
  int r = 5;
  GenCase kind = GenCase::SparseW;
  double sparsity = 0.35;  // fraction of entries zeroed in scattered factors
  double rho = 1.0;        // column sums of the stored ground-truth H
  std::uint64_t seed = 0;
  CertifyMode certify = CertifyMode::None;
  int certify_samples = 1000;
};

struct Instance {
  Matrix x;       // m×n, equals w_true·h_trueᵀ exactly
  Matrix w_true;  // m×r
  Matrix h_true;  // n×r, nonnegative, columns sum to rho
  GenSpec spec;
  std::optional<ScatterVerdict> h_report;
  std::optional<ScatterVerdict> w_report;  // SparseW case only
  int regenerations = 0;
};

/// Draws an instance for the requested case: scattered factors are uniform
/// (0,1) with an exact count of ⌊sparsity·entries⌋ zeroed at random
/// positions; DenseW leaves W fully dense; GaussianW draws W i.i.d. standard
/// normal. Regenerates (up to 20 times) until the factors pass rank checks,
/// H has no all-zero row, and — when certification is requested — the
/// certifier does not return No. Deterministic per seed.
Instance generate(const GenSpec& spec);

/// Minimum over column permutations of the mean squared distance between
/// ℓ₂-normalized columns. Exact assignment via the Hungarian method.
double mse(const Matrix& h_est, const Matrix& h_ref);

/// Minimizing assignment for a square cost matrix: returns col[row].
std::vector<int> hungarian(const Matrix& cost);

}  // namespace nmfid
