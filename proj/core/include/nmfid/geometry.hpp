// Copyright 2026 nmfid contributors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <cstdint>
#include <string>

#include "nmfid/matrix.hpp"

namespace nmfid {

/// The second-order cones used by the scatter condition in dimension r:
///   C     = { x : x·1 ≥ √(r−1)·‖x‖₂ }
///   C*    = { x : x·1 ≥ ‖x‖₂ }          (the dual cone of C)
enum class ConeKind { C, CStar };

struct SecondOrderConeSpec {
  int r = 0;
  ConeKind kind = ConeKind::C;
};

enum class Membership { Interior, Boundary, Outside };

/// Classifies x against the cone by the margin m = x·1 − κ‖x‖₂ with
/// κ = √(r−1) for C and κ = 1 for C*. Boundary when |m| ≤ tol·‖x‖₂.
Membership soc_member(std::span<const double> x, SecondOrderConeSpec spec,
                      double tol = 1e-9);
double soc_margin(std::span<const double> x, SecondOrderConeSpec spec);

/// Extreme rays of the polyhedral cone {y : H·y ≥ 0}, unit length, with the
/// indices of rows active (H·y = 0) at each ray.
struct ExtremeRaySet {
  std::vector<Vector> rays;
  std::vector<std::vector<int>> active_sets;
};

/// Complete extreme-ray enumeration via the double description method.
/// Requires rank(H) = r (pointed dual cone); intended for r ≤ 8.
/// Throws RankDeficient, UnsupportedRank, or ExplosionGuard when the
/// intermediate ray count passes ray_cap.
ExtremeRaySet dual_cone_extreme_rays(const Matrix& h, double tol = 1e-9,
                                     std::size_t ray_cap = 100000);

struct SeparabilityReport {
  bool separable = false;
  std::vector<int> witness;  // witness[k] = row index of a scaled e_k, or −1
};

/// Def-2-style test: every coordinate direction must own a row equal to
/// α·e_kᵀ with α > tol (off entries ≤ tol·row max).
SeparabilityReport check_separability(const Matrix& h, double tol = 1e-9);

enum class Scattered { Yes, No, Unknown };
enum class CheckMode { Exact, Sampling };

struct ScatterCertificate {
  std::string kind;  // "ray-outside", "boundary-not-coordinate", "point-outside-cone"
  Vector vec;
  double margin = 0.0;
};

struct ScatterVerdict {
  SeparabilityReport separability;
  Scattered scattered = Scattered::Unknown;
  CheckMode mode = CheckMode::Exact;
  ExtremeRaySet rays;     // populated in exact mode
  Vector ray_margins;     // C* margin per ray (exact mode)
  ScatterCertificate certificate;  // populated when scattered == No
};

/// Exact certification: enumerates the extreme rays of {y : H·y ≥ 0} and
/// checks (1) every ray lies in C*, (2) rays on the C* boundary are
/// coordinate vectors. Yes/No only; errors propagate from ray enumeration.
ScatterVerdict check_sufficiently_scattered(const Matrix& h,
                                            double tol = 1e-9);

/// Necessary-condition sampler: draws points on the boundary of C and tests
/// membership in cone(Hᵀ) by LP feasibility. Returns No with a certificate
/// point, or Unknown when every sample passes.
ScatterVerdict refute_by_sampling(const Matrix& h, int n_samples,
                                  std::uint64_t seed, double feas_tol = 1e-9);

}  // namespace nmfid
