// Copyright 2026 nmfid contributors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>

#include "nmfid/errors.hpp"
#include "nmfid/io.hpp"
#include "nmfid/rng.hpp"
#include "support/oracles.hpp"

using namespace nmfid;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const char* tag) {
  fs::path p = fs::temp_directory_path() /
               (std::string("nmfid-io-") + tag + "-" +
                std::to_string(::getpid()));
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("matrix CSV round-trips bit-exactly") {
  const fs::path dir = temp_dir("roundtrip");
  std::mt19937_64 rng = make_rng(substream_seed(81, "io"));
  for (int rep = 0; rep < 10; ++rep) {
    Matrix m = oracles::random_gaussian_matrix(1 + static_cast<int>(rng() % 9),
                                               1 + static_cast<int>(rng() % 7),
                                               rng);
    // Exercise extreme magnitudes too.
    if (m.size() > 3) {
      m.data()[0] *= 1e-300;
      m.data()[1] *= 1e300;
      m.data()[2] = 0.0;
    }
    const fs::path f = dir / "m.csv";
    write_matrix_csv(f, m);
    Matrix back = read_matrix_csv(f);
    CHECK(back == m);  // bitwise
  }
  fs::remove_all(dir);
}

TEST_CASE("17 significant digits and LF endings") {
  const fs::path dir = temp_dir("format");
  Matrix m{{1.0 / 3.0, 2.0}, {-0.1, 1e-17}};
  const fs::path f = dir / "m.csv";
  write_matrix_csv(f, m);
  std::ifstream in(f, std::ios::binary);
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  CHECK(content.find("0.33333333333333331") != std::string::npos);
  CHECK(content.find('\r') == std::string::npos);
  CHECK(content.back() == '\n');
  fs::remove_all(dir);
}

TEST_CASE("reader rejects malformed input") {
  const fs::path dir = temp_dir("bad");
  {
    std::ofstream out(dir / "ragged.csv");
    out << "1,2\n3\n";
  }
  CHECK_THROWS_AS(read_matrix_csv(dir / "ragged.csv"), IoError);
  {
    std::ofstream out(dir / "alpha.csv");
    out << "1,x\n";
  }
  CHECK_THROWS_AS(read_matrix_csv(dir / "alpha.csv"), IoError);
  {
    std::ofstream out(dir / "empty.csv");
  }
  CHECK_THROWS_AS(read_matrix_csv(dir / "empty.csv"), IoError);
  CHECK_THROWS_AS(read_matrix_csv(dir / "missing.csv"), IoError);
  fs::remove_all(dir);
}

TEST_CASE("instance bundles round-trip with metadata") {
  const fs::path dir = temp_dir("bundle");
  GenSpec spec;
  spec.m = 20;
  spec.n = 25;
  spec.r = 3;
  spec.seed = 99;
  spec.certify = CertifyMode::Sampling;
  spec.certify_samples = 50;
  Instance inst = generate(spec);
  write_instance_bundle(dir / "b", inst);

  CHECK(fs::exists(dir / "b" / "X.csv"));
  CHECK(fs::exists(dir / "b" / "W.csv"));
  CHECK(fs::exists(dir / "b" / "H.csv"));
  CHECK(fs::exists(dir / "b" / "meta.json"));

  Bundle bundle = read_bundle_or_csv(dir / "b");
  CHECK(bundle.x == inst.x);
  REQUIRE(bundle.w_true.has_value());
  REQUIRE(bundle.h_true.has_value());
  CHECK(*bundle.h_true == inst.h_true);
  REQUIRE(bundle.spec.has_value());
  CHECK(bundle.spec->m == 20);
  CHECK(bundle.spec->n == 25);
  CHECK(bundle.spec->r == 3);
  CHECK(bundle.spec->seed == 99);
  CHECK(bundle.spec->kind == GenCase::SparseW);

  // A bare CSV reads as data-only.
  Bundle bare = read_bundle_or_csv(dir / "b" / "X.csv");
  CHECK(bare.x == inst.x);
  CHECK_FALSE(bare.w_true.has_value());
  fs::remove_all(dir);
}
