// Copyright 2026 nmfid contributors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "nmfid/matrix.hpp"
#include "nmfid/synth.hpp"

namespace nmfid {

/// Headerless CSV, LF line endings, decimal literals with 17 significant
/// digits: round-trips IEEE doubles exactly.
void write_matrix_csv(const std::filesystem::path& path, const Matrix& m);
Matrix read_matrix_csv(const std::filesystem::path& path);

std::string format_double(double v);  // 17 significant digits

/// On-disk instance bundle: X.csv, W.csv, H.csv and meta.json in one
/// directory.
void write_instance_bundle(const std::filesystem::path& dir,
                           const Instance& inst);

struct Bundle {
  Matrix x;
  std::optional<Matrix> w_true;
  std::optional<Matrix> h_true;
  std::optional<GenSpec> spec;  // present when meta.json exists
};

/// Reads a bundle directory, or a bare CSV file as data-only.
Bundle read_bundle_or_csv(const std::filesystem::path& path);

}  // namespace nmfid
