// Copyright 2026 nmfid contributors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "nmfid/baselines.hpp"
#include "nmfid/solver.hpp"
#include "nmfid/synth.hpp"

namespace nmfid {

enum class Method { Proposed, VolMin, Plain, Regularized };

std::string to_string(Method m);
Method method_from_string(const std::string& s);

struct BenchConfig {
  std::vector<GenCase> cases = {GenCase::SparseW, GenCase::DenseW,
                                GenCase::GaussianW};
  std::vector<int> ranks = {5, 10};
  int m = 200;
  int n = 200;
  int trials = 10;
  std::uint64_t seed = 0;
  std::vector<Method> methods = {Method::Proposed, Method::VolMin,
                                 Method::Plain};
  double sparsity = 0.35;
  SolverOptions proposed;
  BaselineOptions plain;
  BaselineOptions volmin;
  BaselineOptions regularized;
  int threads = 0;  // 0 = hardware concurrency
  /// Wall-clock runtime is inherently nondeterministic; switch this off to
  /// get byte-identical results.csv across runs and thread counts.
  bool record_runtime = true;
};

struct TrialRecord {
  Method method = Method::Proposed;
  GenCase kind = GenCase::SparseW;
  int r = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  double mse = 0.0;
  double fit_residual = 0.0;
  double runtime_ms = 0.0;
  bool converged = false;
  std::vector<std::string> flags;
  bool failed = false;
};

struct BenchResult {
  std::vector<TrialRecord> records;
};

/// Seed for one trial, derived by hashing the full coordinate tuple so any
/// single trial is reproducible in isolation.
std::uint64_t bench_trial_seed(std::uint64_t seed, GenCase kind, int r,
                               Method method, int trial);

/// Objective-trace direction check: the determinant solver must climb
/// (non-decreasing within 1e−12 relative), every other method must descend
/// (non-increasing within 1e−12 relative plus noise_floor, which absorbs
/// the evaluation noise of a squared residual near machine precision —
/// pass 1e−28·‖X‖_F² there).
bool trace_is_monotone(Method method, const std::vector<double>& trace,
                       double noise_floor);

/// Runs methods × cases × ranks × trials on a bounded worker pool. Records
/// are sorted by (method, case, r, trial) so the output does not depend on
/// scheduling. Each trial validates its objective-trace monotonicity and
/// flags violations.
BenchResult run_bench(const BenchConfig& config);

void write_results_csv(const std::filesystem::path& path,
                       const BenchResult& result);
void write_summary_md(const std::filesystem::path& path,
                      const BenchConfig& config, const BenchResult& result);

/// Per-cell statistics over successful trials; NaN when the cell is empty.
double cell_mean_mse(const BenchResult& result, Method m, GenCase c, int r);
double cell_median_mse(const BenchResult& result, Method m, GenCase c, int r);
double cell_max_mse(const BenchResult& result, Method m, GenCase c, int r);

/// True when every (method, case, rank) cell has at least one successful trial.
bool all_cells_populated(const BenchConfig& config, const BenchResult& result);

}  // namespace nmfid
