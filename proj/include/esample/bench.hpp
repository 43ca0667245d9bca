#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "esample/io.hpp"
#include "esample/sampling.hpp"

namespace esample {

inline constexpr const char* kBenchSchema = "esample.bench/1";

enum class SweepAxis { None, Branching, InputSize, OutputSize, HamT };

SweepAxis parse_sweep_axis(const std::string& name);
std::string to_string(SweepAxis axis);

struct RunConfig {
  std::string command = "bench";
  /// CSV path; when empty the generator supplies the points.
  std::string input;
  std::string x_col = "x";
  std::string y_col = "y";
  std::string generator = "uniform";
  std::vector<SampleMethod> methods{SampleMethod::Random};
  std::size_t n = 100000;
  std::size_t k = 1000;
  std::size_t t = 64;
  /// 0 keeps the method's own default branching factor.
  int b = 0;
  double r = 8.0;
  int ham_t = kDefaultHamT;
  TestSetMethod test_set = TestSetMethod::Lines;
  CellKind cell = CellKind::polygon(8);
  Presample presample = Presample::Auto;
  std::uint64_t seed = 1;
  std::size_t trials = 1;
  SweepAxis axis = SweepAxis::None;
  std::vector<double> values;
  /// Pivot budget of the approximate error beyond kExactErrorLimit points.
  std::size_t error_budget = 400;
  std::size_t jobs = 1;
  Tolerance tolerance;

  /// Throws InvalidArgument on an inconsistent configuration.
  void validate() const;
  nlohmann::json to_json() const;
};

SampleOptions sample_options(const RunConfig& cfg);

/// Partition of `pts` by a sampling method's underlying construction.
/// Throws InvalidArgument for Random, which has none.
Partition make_partition(std::span<const Point> pts, SampleMethod method, std::size_t t,
                         const RunConfig& cfg, std::uint64_t seed);

struct ErrorMeasure {
  double value = 0.0;
  /// "exact" or "approx".
  std::string kind;
};

/// Exact error up to kExactErrorLimit points, the budgeted estimate beyond.
ErrorMeasure measure_error(std::span<const Point> x, const WeightedSample& s, std::size_t budget,
                           std::uint64_t seed);

struct BenchRecord {
  nlohmann::json config;
  std::string method;
  double axis_value = 0.0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t k_effective = 0;
  double error = 0.0;
  std::string error_kind;
  double seconds = 0.0;
  /// Process peak resident set in KiB (best effort, 0 when unknown).
  long max_rss_kb = 0;
  /// Empty on success, otherwise the error that stopped this record.
  std::string failure;

  nlohmann::json to_json(bool timings) const;
};

/// One record per grid value, method and trial, in that nesting order.
/// Branching sweeps skip methods without a branching factor. Failures are
/// recorded per record and never abort the grid.
std::vector<BenchRecord> run_experiment(const RunConfig& cfg);

/// Long-format CSV, one row per record. Throws IoError.
void write_bench_csv(const std::vector<BenchRecord>& records, const std::string& path, bool timings);
std::vector<std::string> bench_csv_columns();

}  // namespace esample
