// Copyright 2026 nmfid contributors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include "nmfid/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nmfid/errors.hpp"
#include "nmfid/geometry.hpp"

namespace nmfid {

namespace {

std::string scatter_to_string(Scattered s) {
  switch (s) {
    case Scattered::Yes:
      return "yes";
    case Scattered::No:
      return "no";
    case Scattered::Unknown:
      return "unknown";
  }
  return "?";
}

std::string certify_to_string(CertifyMode c) {
  switch (c) {
    case CertifyMode::None:
      return "none";
    case CertifyMode::Sampling:
      return "sampling";
    case CertifyMode::Exact:
      return "exact";
  }
  return "?";
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  std::string line;
  for (int i = 0; i < m.rows(); ++i) {
    line.clear();
    for (int j = 0; j < m.cols(); ++j) {
      if (j) line += ',';
      line += format_double(m(i, j));
    }
    line += '\n';
    out << line;
  }
  if (!out) throw IoError("write failed: " + path.string());
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  std::vector<double> entries;
  int cols = -1;
  int rows = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    int count = 0;
    std::size_t start = 0;
    while (start <= line.size()) {
      std::size_t end = line.find(',', start);
      if (end == std::string::npos) end = line.size();
      const std::string cell = line.substr(start, end - start);
      char* rest = nullptr;
      const double v = std::strtod(cell.c_str(), &rest);
      if (rest == cell.c_str())
        throw IoError("bad number '" + cell + "' in " + path.string());
      entries.push_back(v);
      ++count;
      start = end + 1;
      if (end == line.size()) break;
    }
    if (cols < 0)
      cols = count;
    else if (count != cols)
      throw IoError("ragged CSV row in " + path.string());
    ++rows;
  }
  if (rows == 0) throw IoError("empty CSV: " + path.string());
  return Matrix(rows, cols, std::move(entries));
}

void write_instance_bundle(const std::filesystem::path& dir,
                           const Instance& inst) {
  std::filesystem::create_directories(dir);
  write_matrix_csv(dir / "X.csv", inst.x);
  write_matrix_csv(dir / "W.csv", inst.w_true);
  write_matrix_csv(dir / "H.csv", inst.h_true);

  nlohmann::json meta;
  meta["m"] = inst.spec.m;
  meta["n"] = inst.spec.n;
  meta["r"] = inst.spec.r;
  meta["case"] = to_string(inst.spec.kind);
  meta["sparsity"] = inst.spec.sparsity;
  meta["rho"] = inst.spec.rho;
  meta["seed"] = inst.spec.seed;
  meta["certify"] = certify_to_string(inst.spec.certify);
  auto report_json = [](const ScatterVerdict& v) {
    nlohmann::json j;
    j["scattered"] = scatter_to_string(v.scattered);
    j["mode"] = v.mode == CheckMode::Exact ? "exact" : "sampling";
    j["separable"] = v.separability.separable;
    return j;
  };
  if (inst.h_report) meta["h_verdict"] = report_json(*inst.h_report);
  if (inst.w_report) meta["w_verdict"] = report_json(*inst.w_report);

  std::ofstream out(dir / "meta.json", std::ios::binary);
  if (!out) throw IoError("cannot write meta.json in " + dir.string());
  out << meta.dump(2) << "\n";
}

Bundle read_bundle_or_csv(const std::filesystem::path& path) {
  Bundle b;
  if (std::filesystem::is_directory(path)) {
    b.x = read_matrix_csv(path / "X.csv");
    if (std::filesystem::exists(path / "W.csv"))
      b.w_true = read_matrix_csv(path / "W.csv");
    if (std::filesystem::exists(path / "H.csv"))
      b.h_true = read_matrix_csv(path / "H.csv");
    const auto meta_path = path / "meta.json";
    if (std::filesystem::exists(meta_path)) {
      std::ifstream in(meta_path, std::ios::binary);
      nlohmann::json meta = nlohmann::json::parse(in);
      GenSpec spec;
      spec.m = meta.value("m", 0);
      spec.n = meta.value("n", 0);
      spec.r = meta.value("r", 0);
      spec.kind = gen_case_from_string(meta.value("case", "sparse-w"));
      spec.sparsity = meta.value("sparsity", 0.0);
      spec.rho = meta.value("rho", 1.0);
      spec.seed = meta.value("seed", std::uint64_t{0});
      b.spec = spec;
    }
  } else {
    b.x = read_matrix_csv(path);
  }
  return b;
}

}  // namespace nmfid
