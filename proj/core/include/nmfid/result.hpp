// Copyright 2026 nmfid contributors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <string>
#include <vector>

#include "nmfid/matrix.hpp"

namespace nmfid {

struct SolverResiduals {
  double reconstruction = 0.0;  // ‖X − WHᵀ‖_F / ‖X‖_F
  double min_h_entry = 0.0;     // smallest H entry before clipping
  double max_colsum_dev = 0.0;  // max_k |1·H_{:,k} − rho| (0 when not constrained)
};

/// Output shared by every factorization solver in this library.
struct SolverResult {
  Matrix w;  // M×r
  Matrix h;  // N×r
  Matrix q;  // r×r mixing matrix (determinant solver only; empty otherwise)
  std::vector<double> objective_trace;
  int sweeps = 0;  // sweeps or outer iterations, per solver
  bool converged = false;
  SolverResiduals residuals;
  std::vector<std::string> flags;
};

}  // namespace nmfid
