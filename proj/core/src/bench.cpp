// Copyright 2026 nmfid contributors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#include "nmfid/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <thread>

#include "nmfid/errors.hpp"
#include "nmfid/io.hpp"
#include "nmfid/rng.hpp"

namespace nmfid {

namespace {

const double kNan = std::numeric_limits<double>::quiet_NaN();

TrialRecord run_trial(const BenchConfig& config, Method method, GenCase kind,
                      int r, int trial) {
  TrialRecord rec;
  rec.method = method;
  rec.kind = kind;
  rec.r = r;
  rec.trial = trial;
  rec.seed = bench_trial_seed(config.seed, kind, r, method, trial);
  rec.mse = kNan;
  rec.fit_residual = kNan;

  try {
    GenSpec spec;
    spec.m = config.m;
    spec.n = config.n;
    spec.r = r;
    spec.kind = kind;
    spec.sparsity = config.sparsity;
    spec.rho = 1.0;
    spec.seed = rec.seed;
    spec.certify = CertifyMode::None;
    Instance inst = generate(spec);

    const std::uint64_t solver_seed = substream_seed(rec.seed, "solver");
    const auto start = std::chrono::steady_clock::now();
    SolverResult result;
    switch (method) {
      case Method::Proposed: {
        SolverOptions o = config.proposed;
        o.seed = solver_seed;
        result = solve_proposed(inst.x, r, o);
        break;
      }
      case Method::VolMin: {
        BaselineOptions o = config.volmin;
        o.seed = solver_seed;
        result = solve_volmin_mves(inst.x, r, o);
        break;
      }
      case Method::Plain: {
        BaselineOptions o = config.plain;
        o.seed = solver_seed;
        o.clip_negative_input = true;  // the harness always clips
        result = solve_plain_nmf(inst.x, r, o);
        break;
      }
      case Method::Regularized: {
        BaselineOptions o = config.regularized;
        o.seed = solver_seed;
        result = solve_regularized(inst.x, r, o);
        break;
      }
    }
    const auto stop = std::chrono::steady_clock::now();
    if (config.record_runtime)
      rec.runtime_ms =
          std::chrono::duration<double, std::milli>(stop - start).count();

    rec.converged = result.converged;
    rec.fit_residual = result.residuals.reconstruction;
    rec.flags = result.flags;
    const double xf = frobenius_norm(inst.x);
    if (!trace_is_monotone(method, result.objective_trace, 1e-28 * xf * xf))
      rec.flags.push_back("monotonicity_violation");
    try {
      rec.mse = mse(result.h, inst.h_true);
    } catch (const ZeroColumn&) {
      rec.flags.push_back("mse_zero_column");
      rec.failed = true;
    }
  } catch (const Error& e) {
    rec.failed = true;
    rec.flags.push_back(std::string("error:") + e.what());
  }
  return rec;
}

std::vector<double> cell_mses(const BenchResult& result, Method m, GenCase c,
                              int r) {
  std::vector<double> v;
  for (const TrialRecord& rec : result.records)
    if (rec.method == m && rec.kind == c && rec.r == r && !rec.failed)
      v.push_back(rec.mse);
  std::sort(v.begin(), v.end());
  return v;
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

std::string join_flags(const std::vector<std::string>& flags) {
  std::string out;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    if (i) out += ';';
    out += flags[i];
  }
  return out;
}

}  // namespace

bool trace_is_monotone(Method method, const std::vector<double>& trace,
                       double noise_floor) {
  if (trace.size() < 2) return true;
  if (method == Method::Proposed) {
    for (std::size_t i = 1; i < trace.size(); ++i)
      if (trace[i] < trace[i - 1] * (1.0 - 1e-12)) return false;
    return true;
  }
  for (std::size_t i = 1; i < trace.size(); ++i)
    if (trace[i] > trace[i - 1] * (1.0 + 1e-12) + noise_floor) return false;
  return true;
}

std::string to_string(Method m) {
  switch (m) {
    case Method::Proposed:
      return "proposed";
    case Method::VolMin:
      return "volmin";
    case Method::Plain:
      return "plain";
    case Method::Regularized:
      return "regularized";
  }
  return "?";
}

Method method_from_string(const std::string& s) {
  if (s == "proposed") return Method::Proposed;
  if (s == "volmin") return Method::VolMin;
  if (s == "plain") return Method::Plain;
  if (s == "regularized") return Method::Regularized;
  throw Error("unknown method: " + s);
}

std::uint64_t bench_trial_seed(std::uint64_t seed, GenCase kind, int r,
                               Method method, int trial) {
  std::uint64_t h = splitmix64(seed ^ fnv1a("bench-trial"));
  h = splitmix64(h ^ fnv1a(to_string(kind)));
  h = splitmix64(h ^ fnv1a(to_string(method)));
  h = splitmix64(h ^ static_cast<std::uint64_t>(r));
  h = splitmix64(h ^ static_cast<std::uint64_t>(trial));
  return h;
}

BenchResult run_bench(const BenchConfig& config) {
  if (config.trials < 1) throw Error("bench: trials must be >= 1");
  if (config.cases.empty() || config.methods.empty())
    throw Error("bench: cases and methods must be non-empty");

  struct Job {
    Method method;
    GenCase kind;
    int r;
    int trial;
  };
  std::vector<Job> jobs;
  for (Method m : config.methods)
    for (GenCase c : config.cases)
      for (int r : config.ranks)
        for (int t = 0; t < config.trials; ++t) jobs.push_back({m, c, r, t});

  BenchResult result;
  result.records.resize(jobs.size());

  int threads = config.threads;
  if (threads <= 0)
    threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min<int>(threads, static_cast<int>(jobs.size())));

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      const Job& job = jobs[i];
      result.records[i] =
          run_trial(config, job.method, job.kind, job.r, job.trial);
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::sort(result.records.begin(), result.records.end(),
            [](const TrialRecord& a, const TrialRecord& b) {
              const auto key = [](const TrialRecord& r) {
                return std::make_tuple(to_string(r.method), to_string(r.kind),
                                       r.r, r.trial);
              };
              return key(a) < key(b);
            });
  return result;
}

void write_results_csv(const std::filesystem::path& path,
                       const BenchResult& result) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << "method,case,r,trial,seed,mse,fit_residual,runtime_ms,converged,flags\n";
  for (const TrialRecord& rec : result.records) {
    out << to_string(rec.method) << ',' << to_string(rec.kind) << ',' << rec.r
        << ',' << rec.trial << ',' << rec.seed << ','
        << format_double(rec.mse) << ',' << format_double(rec.fit_residual)
        << ',' << format_double(rec.runtime_ms) << ','
        << bool_str(rec.converged) << ',' << join_flags(rec.flags) << '\n';
  }
}

double cell_mean_mse(const BenchResult& result, Method m, GenCase c, int r) {
  const std::vector<double> v = cell_mses(result, m, c, r);
  if (v.empty()) return kNan;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double cell_median_mse(const BenchResult& result, Method m, GenCase c, int r) {
  const std::vector<double> v = cell_mses(result, m, c, r);
  if (v.empty()) return kNan;
  const std::size_t k = v.size() / 2;
  return v.size() % 2 == 1 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

double cell_max_mse(const BenchResult& result, Method m, GenCase c, int r) {
  const std::vector<double> v = cell_mses(result, m, c, r);
  return v.empty() ? kNan : v.back();
}

bool all_cells_populated(const BenchConfig& config, const BenchResult& result) {
  for (Method m : config.methods)
    for (GenCase c : config.cases)
      for (int r : config.ranks)
        if (cell_mses(result, m, c, r).empty()) return false;
  return true;
}

void write_summary_md(const std::filesystem::path& path,
                      const BenchConfig& config, const BenchResult& result) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());

  auto sci = [](double v) {
    if (std::isnan(v)) return std::string("n/a");
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2E", v);
    return std::string(buf);
  };

  out << "# Benchmark summary\n\n";
  out << "- m = " << config.m << ", n = " << config.n
      << ", trials = " << config.trials << ", seed = " << config.seed
      << ", sparsity = " << config.sparsity << "\n\n";
  out << "MSE of the recovered H against the ground truth (per cell: "
         "mean / median / max over successful trials).\n\n";

  out << "| Method |";
  for (GenCase c : config.cases)
    out << ' ' << to_string(c) << " mean | median | max |";
  out << "\n|---|";
  for (std::size_t i = 0; i < config.cases.size(); ++i) out << "---|---|---|";
  out << "\n";
  for (Method m : config.methods) {
    for (int r : config.ranks) {
      out << "| " << to_string(m) << " (r=" << r << ") |";
      for (GenCase c : config.cases) {
        out << ' ' << sci(cell_mean_mse(result, m, c, r)) << " | "
            << sci(cell_median_mse(result, m, c, r)) << " | "
            << sci(cell_max_mse(result, m, c, r)) << " |";
      }
      out << "\n";
    }
  }

  std::size_t failed = 0;
  for (const TrialRecord& rec : result.records)
    if (rec.failed) ++failed;
  out << "\nTrials: " << result.records.size() << " total, " << failed
      << " failed.\n";
}

}  // namespace nmfid
