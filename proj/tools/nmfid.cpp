// Copyright 2026 nmfid contributors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)
//
// Command-line front end: instance generation, single solves, geometry
// checks, MSE evaluation, and the benchmark harness.
//
// Exit codes: 0 success (including Unknown verdicts and non-converged
// solves), 2 invalid flags or mismatched shapes on `mse`, 3 generation
// budget exhausted, 4 solver or input errors, 5 a geometry check that
// answers No.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "nmfid/baselines.hpp"
#include "nmfid/bench.hpp"
#include "nmfid/errors.hpp"
#include "nmfid/io.hpp"
#include "nmfid/solver.hpp"
#include "nmfid/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace nmfid;

namespace {

struct CertifyChoice {
  CertifyMode mode = CertifyMode::None;
  int samples = 1000;
};

CertifyChoice parse_certify(const std::string& text) {
  CertifyChoice c;
  if (text == "none") return c;
  if (text == "exact") {
    c.mode = CertifyMode::Exact;
    return c;
  }
  if (text.rfind("sampling", 0) == 0) {
    c.mode = CertifyMode::Sampling;
    const auto colon = text.find(':');
    if (colon != std::string::npos) {
      c.samples = std::stoi(text.substr(colon + 1));
      if (c.samples < 1) throw CLI::ValidationError("--certify", "K must be >= 1");
    }
    return c;
  }
  throw CLI::ValidationError("--certify",
                             "expected none, exact, or sampling[:K]");
}

std::string scatter_str(Scattered s) {
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

json verdict_json(const ScatterVerdict& v) {
  json j;
  j["scattered"] = scatter_str(v.scattered);
  j["mode"] = v.mode == CheckMode::Exact ? "exact" : "sampling";
  j["separable"] = v.separability.separable;
  j["witness"] = v.separability.witness;
  if (v.mode == CheckMode::Exact) {
    j["num_rays"] = v.rays.rays.size();
    j["ray_margins"] = v.ray_margins;
  }
  if (v.scattered == Scattered::No) {
    j["certificate"] = {{"kind", v.certificate.kind},
                        {"vector", v.certificate.vec},
                        {"margin", v.certificate.margin}};
  }
  return j;
}

void print_verdict(const ScatterVerdict& v) {
  std::cout << "separable: " << (v.separability.separable ? "true" : "false");
  if (v.separability.separable) {
    std::cout << " (witness rows:";
    for (int w : v.separability.witness) std::cout << ' ' << w;
    std::cout << ")";
  }
  std::cout << "\nsufficiently scattered: " << scatter_str(v.scattered)
            << " (mode " << (v.mode == CheckMode::Exact ? "exact" : "sampling")
            << ")\n";
  if (v.mode == CheckMode::Exact)
    std::cout << "extreme rays: " << v.rays.rays.size() << "\n";
  if (v.scattered == Scattered::No) {
    std::cout << "certificate: " << v.certificate.kind << " [";
    for (std::size_t i = 0; i < v.certificate.vec.size(); ++i)
      std::cout << (i ? ", " : "") << format_double(v.certificate.vec[i]);
    std::cout << "], margin " << format_double(v.certificate.margin) << "\n";
  }
}

// ---------------------------------------------------------------- gen ----

struct GenArgs {
  std::string case_name = "sparse-w";
  int m = 200, n = 200, rank = 5;
  double sparsity = 0.35, rho = 1.0;
  std::uint64_t seed = 0;
  std::string certify = "none";
  std::string out;
};

int cmd_gen(const GenArgs& args) {
  GenSpec spec;
  spec.kind = gen_case_from_string(args.case_name);
  spec.m = args.m;
  spec.n = args.n;
  spec.r = args.rank;
  spec.sparsity = args.sparsity;
  spec.rho = args.rho;
  spec.seed = args.seed;
  const CertifyChoice certify = parse_certify(args.certify);
  spec.certify = certify.mode;
  spec.certify_samples = certify.samples;

  Instance inst = generate(spec);
  write_instance_bundle(args.out, inst);

  std::cout << "wrote " << args.out << " (" << spec.m << "x" << spec.n
            << ", rank " << spec.r << ", case " << args.case_name << ")\n";
  if (inst.regenerations > 0)
    std::cout << "regenerations: " << inst.regenerations << "\n";
  if (inst.h_report) {
    std::cout << "H verdict:\n";
    print_verdict(*inst.h_report);
  }
  if (inst.w_report) {
    std::cout << "W verdict:\n";
    print_verdict(*inst.w_report);
  }
  return 0;
}

// -------------------------------------------------------------- solve ----

struct SolveArgs {
  std::string method = "proposed";
  std::string input;
  int rank = 0;
  double tol = 1e-10;
  int max_sweeps = 200;
  int max_iters = 2000;
  std::uint64_t seed = 0;
  double lambda = 0.0;
  double rho = 1.0;
  bool no_clip = false;
  std::string out = "result.json";
};

int cmd_solve(const SolveArgs& args) {
  const Bundle bundle = read_bundle_or_csv(args.input);
  int rank = args.rank;
  if (rank == 0 && bundle.spec) rank = bundle.spec->r;
  if (rank < 1) throw Error("rank is required when the input has no meta.json");

  const Method method = method_from_string(args.method);
  const auto start = std::chrono::steady_clock::now();
  SolverResult result;
  json options_echo;
  switch (method) {
    case Method::Proposed: {
      SolverOptions o;
      o.rel_tol = args.tol;
      o.max_sweeps = args.max_sweeps;
      o.seed = args.seed;
      o.rho = args.rho;
      result = solve_proposed(bundle.x, rank, o);
      options_echo = {{"rel_tol", o.rel_tol},
                      {"max_sweeps", o.max_sweeps},
                      {"seed", o.seed},
                      {"rho", o.rho}};
      break;
    }
    case Method::VolMin:
    case Method::Plain:
    case Method::Regularized: {
      BaselineOptions o;
      o.rel_tol = args.tol;
      o.max_iters = args.max_iters;
      o.seed = args.seed;
      o.lambda = args.lambda;
      o.rho = args.rho;
      o.clip_negative_input = method == Method::Plain && !args.no_clip;
      if (method == Method::VolMin)
        result = solve_volmin_mves(bundle.x, rank, o);
      else if (method == Method::Plain)
        result = solve_plain_nmf(bundle.x, rank, o);
      else
        result = solve_regularized(bundle.x, rank, o);
      options_echo = {{"rel_tol", o.rel_tol},
                      {"max_iters", o.max_iters},
                      {"seed", o.seed},
                      {"lambda", o.lambda},
                      {"rho", o.rho},
                      {"clip_negative_input", o.clip_negative_input}};
      break;
    }
  }
  const auto stop = std::chrono::steady_clock::now();
  const double runtime_ms =
      std::chrono::duration<double, std::milli>(stop - start).count();

  fs::path out_path(args.out);
  fs::path stem = out_path;
  stem.replace_extension();
  const fs::path w_path = stem.string() + ".W.csv";
  const fs::path h_path = stem.string() + ".H.csv";
  if (out_path.has_parent_path())
    fs::create_directories(out_path.parent_path());
  write_matrix_csv(w_path, result.w);
  write_matrix_csv(h_path, result.h);

  json out;
  out["method"] = args.method;
  out["rank"] = rank;
  out["options"] = options_echo;
  out["w_csv"] = w_path.filename().string();
  out["h_csv"] = h_path.filename().string();
  out["objective_trace"] = result.objective_trace;
  out["sweeps"] = result.sweeps;
  out["converged"] = result.converged;
  out["runtime_ms"] = runtime_ms;
  out["flags"] = result.flags;
  out["residuals"] = {{"reconstruction", result.residuals.reconstruction},
                      {"min_h_entry", result.residuals.min_h_entry},
                      {"max_colsum_dev", result.residuals.max_colsum_dev}};
  if (bundle.h_true) out["mse"] = mse(result.h, *bundle.h_true);

  std::ofstream os(out_path, std::ios::binary);
  if (!os) throw IoError("cannot write " + out_path.string());
  os << out.dump(2) << "\n";

  std::cout << "method " << args.method << ": converged="
            << (result.converged ? "true" : "false")
            << " fit_residual=" << format_double(result.residuals.reconstruction);
  if (out.contains("mse"))
    std::cout << " mse=" << format_double(out["mse"].get<double>());
  std::cout << "\nwrote " << out_path.string() << "\n";
  return 0;
}

// -------------------------------------------------------------- check ----

struct CheckArgs {
  std::string h_path;
  bool exact = false;
  int samples = 0;
  double tol = 1e-9;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_check(const CheckArgs& args) {
  const Matrix h = read_matrix_csv(args.h_path);
  ScatterVerdict verdict;
  if (args.samples > 0 && !args.exact)
    verdict = refute_by_sampling(h, args.samples, args.seed, args.tol);
  else
    verdict = check_sufficiently_scattered(h, args.tol);
  print_verdict(verdict);
  if (!args.out.empty()) {
    std::ofstream os(args.out, std::ios::binary);
    if (!os) throw IoError("cannot write " + args.out);
    os << verdict_json(verdict).dump(2) << "\n";
  }
  return verdict.scattered == Scattered::No ? 5 : 0;
}

// ---------------------------------------------------------------- mse ----

int cmd_mse(const std::string& est, const std::string& ref) {
  try {
    const double value = mse(read_matrix_csv(est), read_matrix_csv(ref));
    std::cout << format_double(value) << "\n";
    return 0;
  } catch (const ShapeMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

// -------------------------------------------------------------- bench ----

struct BenchArgs {
  std::string config_path;
  std::vector<std::string> cases;
  std::vector<int> ranks;
  int m = -1, n = -1, trials = -1, threads = -1;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::vector<std::string> methods;
  double sparsity = -1.0;
  double tol = -1.0;
  int max_sweeps = -1, max_iters = -1;
  bool no_runtime = false;
  std::string out = "bench-out";
};

void apply_config_file(BenchConfig& config, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config " + path);
  json j = json::parse(in);
  if (j.contains("cases")) {
    config.cases.clear();
    for (const auto& c : j["cases"])
      config.cases.push_back(gen_case_from_string(c.get<std::string>()));
  }
  if (j.contains("methods")) {
    config.methods.clear();
    for (const auto& m : j["methods"])
      config.methods.push_back(method_from_string(m.get<std::string>()));
  }
  if (j.contains("ranks")) config.ranks = j["ranks"].get<std::vector<int>>();
  if (j.contains("m")) config.m = j["m"].get<int>();
  if (j.contains("n")) config.n = j["n"].get<int>();
  if (j.contains("trials")) config.trials = j["trials"].get<int>();
  if (j.contains("seed")) config.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("threads")) config.threads = j["threads"].get<int>();
  if (j.contains("sparsity")) config.sparsity = j["sparsity"].get<double>();
  if (j.contains("record_runtime"))
    config.record_runtime = j["record_runtime"].get<bool>();
  if (j.contains("proposed")) {
    const auto& p = j["proposed"];
    if (p.contains("max_sweeps"))
      config.proposed.max_sweeps = p["max_sweeps"].get<int>();
    if (p.contains("rel_tol"))
      config.proposed.rel_tol = p["rel_tol"].get<double>();
  }
  for (const char* name : {"plain", "volmin", "regularized"}) {
    if (!j.contains(name)) continue;
    BaselineOptions& o = name == std::string("plain")
                             ? config.plain
                             : (name == std::string("volmin")
                                    ? config.volmin
                                    : config.regularized);
    const auto& b = j[name];
    if (b.contains("max_iters")) o.max_iters = b["max_iters"].get<int>();
    if (b.contains("rel_tol")) o.rel_tol = b["rel_tol"].get<double>();
    if (b.contains("lambda")) o.lambda = b["lambda"].get<double>();
  }
}

int cmd_bench(const BenchArgs& args) {
  BenchConfig config;
  config.trials = 10;
  if (!args.config_path.empty()) apply_config_file(config, args.config_path);

  if (!args.cases.empty()) {
    config.cases.clear();
    for (const auto& c : args.cases)
      config.cases.push_back(gen_case_from_string(c));
  }
  if (!args.methods.empty()) {
    config.methods.clear();
    for (const auto& m : args.methods)
      config.methods.push_back(method_from_string(m));
  }
  if (!args.ranks.empty()) config.ranks = args.ranks;
  if (args.m > 0) config.m = args.m;
  if (args.n > 0) config.n = args.n;
  if (args.trials > 0) config.trials = args.trials;
  if (args.threads >= 0) config.threads = args.threads;
  if (args.seed_set) config.seed = args.seed;
  if (args.sparsity >= 0.0) config.sparsity = args.sparsity;
  if (args.no_runtime) config.record_runtime = false;
  if (args.tol > 0.0) {
    config.proposed.rel_tol = args.tol;
    config.plain.rel_tol = args.tol;
    config.volmin.rel_tol = args.tol;
    config.regularized.rel_tol = args.tol;
  }
  if (args.max_sweeps > 0) config.proposed.max_sweeps = args.max_sweeps;
  if (args.max_iters > 0) {
    config.plain.max_iters = args.max_iters;
    config.volmin.max_iters = args.max_iters;
    config.regularized.max_iters = args.max_iters;
  }

  BenchResult result = run_bench(config);
  fs::create_directories(args.out);
  const fs::path results_path = fs::path(args.out) / "results.csv";
  const fs::path summary_path = fs::path(args.out) / "summary.md";
  write_results_csv(results_path, result);
  write_summary_md(summary_path, config, result);

  std::size_t failed = 0;
  for (const TrialRecord& rec : result.records)
    if (rec.failed) ++failed;
  std::cout << "ran " << result.records.size() << " trials (" << failed
            << " failed)\nwrote " << results_path.string() << "\nwrote "
            << summary_path.string() << "\n";
  if (!all_cells_populated(config, result)) {
    std::cerr << "error: some (method, case, rank) cell has no successful "
                 "trial\n";
    return 4;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Identifiable NMF: determinant-criterion solver, geometry "
               "certification, baselines, and benchmark harness"};
  // `check --h` needs the short -h slot, so help is --help only.
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);

  GenArgs gen_args;
  CLI::App* gen = app.add_subcommand("gen", "Generate a synthetic instance bundle");
  gen->add_option("--case", gen_args.case_name, "sparse-w|dense-w|gaussian-w")
      ->check(CLI::IsMember({"sparse-w", "dense-w", "gaussian-w"}));
  gen->add_option("--m", gen_args.m)->check(CLI::PositiveNumber);
  gen->add_option("--n", gen_args.n)->check(CLI::PositiveNumber);
  gen->add_option("--rank", gen_args.rank)->check(CLI::PositiveNumber);
  gen->add_option("--sparsity", gen_args.sparsity)
      ->check(CLI::Range(0.0, 0.999999));
  gen->add_option("--rho", gen_args.rho)->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_args.seed);
  gen->add_option("--certify", gen_args.certify,
                  "none | exact | sampling[:K]");
  gen->add_option("--out", gen_args.out, "output bundle directory")
      ->required();

  SolveArgs solve_args;
  CLI::App* solve = app.add_subcommand("solve", "Factor a data matrix");
  solve->add_option("--method", solve_args.method,
                    "proposed|volmin|plain|regularized")
      ->check(CLI::IsMember({"proposed", "volmin", "plain", "regularized"}));
  solve->add_option("--input", solve_args.input,
                    "bundle directory or bare X.csv")
      ->required();
  solve->add_option("--rank", solve_args.rank)->check(CLI::PositiveNumber);
  solve->add_option("--tol", solve_args.tol)->check(CLI::PositiveNumber);
  solve->add_option("--max-sweeps", solve_args.max_sweeps)
      ->check(CLI::PositiveNumber);
  solve->add_option("--max-iters", solve_args.max_iters)
      ->check(CLI::PositiveNumber);
  solve->add_option("--seed", solve_args.seed);
  solve->add_option("--lambda", solve_args.lambda)
      ->check(CLI::NonNegativeNumber);
  solve->add_option("--rho", solve_args.rho)->check(CLI::PositiveNumber);
  solve->add_flag("--no-clip", solve_args.no_clip,
                  "plain: error on negative data instead of clipping");
  solve->add_option("--out", solve_args.out, "result JSON path");

  CheckArgs check_args;
  CLI::App* check = app.add_subcommand(
      "check", "Certify separability and the sufficiently scattered condition");
  check->add_option("--h", check_args.h_path, "H matrix CSV")->required();
  CLI::Option* exact_flag =
      check->add_flag("--exact", check_args.exact, "exact certification");
  check->add_option("--samples", check_args.samples,
                    "sampling refuter with K samples")
      ->excludes(exact_flag)
      ->check(CLI::PositiveNumber);
  check->add_option("--tol", check_args.tol)->check(CLI::PositiveNumber);
  check->add_option("--seed", check_args.seed);
  check->add_option("--out", check_args.out, "machine-readable report path");

  std::string mse_est, mse_ref;
  CLI::App* mse_cmd = app.add_subcommand("mse", "Permutation-matched column MSE");
  mse_cmd->add_option("--est", mse_est)->required();
  mse_cmd->add_option("--ref", mse_ref)->required();

  BenchArgs bench_args;
  CLI::App* bench = app.add_subcommand("bench", "Benchmark harness");
  bench->add_option("--config", bench_args.config_path, "JSON config file");
  bench->add_option("--cases", bench_args.cases)->delimiter(',');
  bench->add_option("--ranks", bench_args.ranks)->delimiter(',');
  bench->add_option("--m", bench_args.m)->check(CLI::PositiveNumber);
  bench->add_option("--n", bench_args.n)->check(CLI::PositiveNumber);
  bench->add_option("--trials", bench_args.trials)->check(CLI::PositiveNumber);
  bench->add_option("--seed", bench_args.seed)
      ->each([&](const std::string&) { bench_args.seed_set = true; });
  bench->add_option("--methods", bench_args.methods)->delimiter(',');
  bench->add_option("--sparsity", bench_args.sparsity)
      ->check(CLI::Range(0.0, 0.999999));
  bench->add_option("--threads", bench_args.threads)
      ->check(CLI::NonNegativeNumber);
  bench->add_option("--tol", bench_args.tol)->check(CLI::PositiveNumber);
  bench->add_option("--max-sweeps", bench_args.max_sweeps)
      ->check(CLI::PositiveNumber);
  bench->add_option("--max-iters", bench_args.max_iters)
      ->check(CLI::PositiveNumber);
  bench->add_flag("--no-record-runtime", bench_args.no_runtime,
                  "write 0 runtimes so results.csv is byte-deterministic");
  bench->add_option("--out", bench_args.out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(gen)) return cmd_gen(gen_args);
    if (app.got_subcommand(solve)) return cmd_solve(solve_args);
    if (app.got_subcommand(check)) return cmd_check(check_args);
    if (app.got_subcommand(mse_cmd)) return cmd_mse(mse_est, mse_ref);
    if (app.got_subcommand(bench)) return cmd_bench(bench_args);
  } catch (const CertifyBudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 2;
}
