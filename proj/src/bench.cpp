#include "esample/bench.hpp"

#include <sys/resource.h>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <thread>

#include "esample/random.hpp"

namespace esample {

SweepAxis parse_sweep_axis(const std::string& name) {
  if (name == "none") return SweepAxis::None;
  if (name == "branching") return SweepAxis::Branching;
  if (name == "input_size") return SweepAxis::InputSize;
  if (name == "output_size") return SweepAxis::OutputSize;
  if (name == "ham_t") return SweepAxis::HamT;
  throw Error(ErrorCode::InvalidArgument, "unknown sweep axis '" + name + "'");
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::None: return "none";
    case SweepAxis::Branching: return "branching";
    case SweepAxis::InputSize: return "input_size";
    case SweepAxis::OutputSize: return "output_size";
    case SweepAxis::HamT: return "ham_t";
  }
  return "none";
}

void RunConfig::validate() const {
  auto bad = [](const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); };
  tolerance.validate();
  if (methods.empty()) bad("no methods given");
  if (n < 1) bad("n must be >= 1");
  if (k < 2) bad("k must be >= 2");
  if (t < 2) bad("t must be >= 2");
  if (!(r > 1.0)) bad("r must exceed 1");
  if (ham_t < 2) bad("ham-t must be >= 2");
  if (trials < 1) bad("trials must be >= 1");
  if (jobs < 1) bad("jobs must be >= 1");
  if (error_budget < 1) bad("error budget must be >= 1");
  if (b != 0 && b < 2) bad("b must be >= 2");
  if (axis == SweepAxis::None && !values.empty()) bad("sweep values given without an axis");
  if (axis != SweepAxis::None && values.empty()) bad("axis '" + to_string(axis) + "' needs values");
  for (double v : values) {
    if (!(v >= 1.0) || v != std::floor(v)) bad("sweep values must be positive integers");
  }
  if (input.empty()) parse_generator(generator);
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json m = nlohmann::json::array();
  for (auto method : methods) m.push_back(esample::to_string(method));
  return {{"command", command},
          {"input", input},
          {"x_col", x_col},
          {"y_col", y_col},
          {"generator", input.empty() ? to_string(parse_generator(generator)) : ""},
          {"methods", m},
          {"n", n},
          {"k", k},
          {"t", t},
          {"b", b},
          {"r", r},
          {"ham_t", ham_t},
          {"test_set", esample::to_string(test_set)},
          {"cell", cell.name()},
          {"presample", presample == Presample::On ? "on" : presample == Presample::Off ? "off" : "auto"},
          {"seed", seed},
          {"trials", trials},
          {"axis", to_string(axis)},
          {"values", values},
          {"error_budget", error_budget},
          {"tolerance", {{"rel", tolerance.rel_tol}, {"abs", tolerance.abs_tol}}}};
}

SampleOptions sample_options(const RunConfig& cfg) {
  SampleOptions opts;
  opts.presample = cfg.presample;
  opts.ham_t = cfg.ham_t;
  opts.mat.test_set = cfg.test_set;
  opts.mat.kind = cfg.cell;
  opts.chan.kind = cfg.cell;
  if (cfg.b != 0) {
    opts.mat.b = cfg.b;
    opts.chan.b = cfg.b;
  }
  return opts;
}

Partition make_partition(std::span<const Point> pts, SampleMethod method, std::size_t t,
                         const RunConfig& cfg, std::uint64_t seed) {
  SampleOptions opts = sample_options(cfg);
  std::size_t leaf = (pts.size() + t - 1) / std::max<std::size_t>(t, 1);
  switch (method) {
    case SampleMethod::Mat: return partition_mat(pts, t, opts.mat, seed);
    case SampleMethod::Chan: return partition_chan(pts, t, opts.chan, seed);
    case SampleMethod::ChanSimple: {
      opts.chan.simple = true;
      return partition_chan(pts, t, opts.chan, seed);
    }
    case SampleMethod::Ham: return ham_tree(pts, leaf, cfg.ham_t, seed);
    case SampleMethod::DoubleHam: return double_ham_tree(pts, leaf, cfg.ham_t, seed);
    case SampleMethod::Random: break;
  }
  throw Error(ErrorCode::InvalidArgument, "method 'random' builds no partition");
}

ErrorMeasure measure_error(std::span<const Point> x, const WeightedSample& s, std::size_t budget,
                           std::uint64_t seed) {
  if (x.size() <= kExactErrorLimit) return {exact_error(x, s), "exact"};
  return {approx_error(x, s, budget, seed), "approx"};
}

nlohmann::json BenchRecord::to_json(bool timings) const {
  nlohmann::json j = {{"schema", kBenchSchema},
                      {"config", config},
                      {"method", method},
                      {"axis_value", axis_value},
                      {"trial", trial},
                      {"seed", seed},
                      {"n", n},
                      {"k", k},
                      {"status", failure.empty() ? "ok" : "error"},
                      {"metrics", {{"k_effective", k_effective}, {"error", error}, {"error_kind", error_kind}}}};
  if (!failure.empty()) j["failure"] = failure;
  if (timings) {
    j["seconds"] = seconds;
    j["max_rss_kb"] = max_rss_kb;
  }
  return j;
}

namespace {

long peak_rss_kb() {
  rusage usage{};
  if (getrusage(RUSAGE_SELF, &usage) != 0) return 0;
  return usage.ru_maxrss;
}

bool has_branching(SampleMethod m) {
  return m == SampleMethod::Mat || m == SampleMethod::Chan || m == SampleMethod::ChanSimple;
}

std::uint64_t trial_seed(std::uint64_t base, std::size_t trial) {
  return base + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(trial + 1);
}

}  // namespace

std::vector<BenchRecord> run_experiment(const RunConfig& cfg) {
  cfg.validate();
  std::vector<double> values = cfg.values;
  if (values.empty()) values.push_back(0.0);

  std::vector<Point> ingested;
  if (!cfg.input.empty()) ingested = ingest_csv(cfg.input, cfg.x_col, cfg.y_col, {}, true, cfg.seed).points;
  GeneratorSpec gen = cfg.input.empty() ? parse_generator(cfg.generator) : GeneratorSpec{};

  // Point sets are shared by all methods of one (size, trial) pair so their
  // errors compare on identical data.
  std::map<std::pair<std::size_t, std::size_t>, std::vector<Point>> data;
  auto size_for = [&](double v) {
    return cfg.axis == SweepAxis::InputSize ? static_cast<std::size_t>(v) : cfg.n;
  };
  for (double v : values) {
    for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
      auto key = std::make_pair(size_for(v), trial);
      if (data.count(key)) continue;
      std::uint64_t s = trial_seed(cfg.seed, trial);
      if (ingested.empty()) {
        data[key] = generate(gen, key.first, s);
      } else if (key.first >= ingested.size()) {
        data[key] = ingested;
      } else {
        Rng rng(s);
        std::vector<Point> sub;
        for (std::size_t i : sample_indices(ingested.size(), key.first, rng)) sub.push_back(ingested[i]);
        data[key] = std::move(sub);
      }
    }
  }

  struct Task {
    double value;
    SampleMethod method;
    std::size_t trial;
  };
  std::vector<Task> tasks;
  for (double v : values) {
    for (auto m : cfg.methods) {
      if (cfg.axis == SweepAxis::Branching && !has_branching(m)) continue;
      for (std::size_t trial = 0; trial < cfg.trials; ++trial) tasks.push_back({v, m, trial});
    }
  }

  nlohmann::json echo = cfg.to_json();
  std::vector<BenchRecord> records(tasks.size());
  auto run_one = [&](std::size_t i) {
    const Task& task = tasks[i];
    RunConfig local = cfg;
    if (cfg.axis == SweepAxis::Branching) local.b = static_cast<int>(task.value);
    if (cfg.axis == SweepAxis::OutputSize) local.k = static_cast<std::size_t>(task.value);
    if (cfg.axis == SweepAxis::HamT) local.ham_t = static_cast<int>(task.value);
    const auto& pts = data.at({size_for(task.value), task.trial});

    BenchRecord& rec = records[i];
    rec.config = echo;
    rec.method = to_string(task.method);
    rec.axis_value = task.value;
    rec.trial = task.trial;
    rec.seed = trial_seed(cfg.seed, task.trial);
    rec.n = pts.size();
    rec.k = local.k;
    try {
      auto sample = epsilon_sample(pts, local.k, task.method, sample_options(local), rec.seed);
      rec.seconds = sample.seconds;
      rec.k_effective = sample.k_effective;
      auto err = measure_error(pts, sample, cfg.error_budget, rec.seed ^ 0x5bd1e995ULL);
      rec.error = err.value;
      rec.error_kind = err.kind;
    } catch (const std::exception& e) {
      rec.failure = e.what();
    }
    rec.max_rss_kb = peak_rss_kb();
  };

  std::size_t workers = std::min(cfg.jobs, tasks.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) run_one(i);
      });
    }
    for (auto& th : pool) th.join();
  }
  return records;
}

std::vector<std::string> bench_csv_columns() {
  return {"schema", "method",     "axis",   "axis_value", "trial",   "seed",       "n",      "k",
          "b",      "ham_t",      "generator", "k_effective", "error", "error_kind", "status", "seconds",
          "max_rss_kb"};
}

void write_bench_csv(const std::vector<BenchRecord>& records, const std::string& path, bool timings) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  auto cols = bench_csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << "\n";
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return std::string(buf);
  };
  for (const auto& r : records) {
    const auto& c = r.config;
    int b = c["b"].get<int>();
    int ham_t = c["ham_t"].get<int>();
    std::string axis = c["axis"].get<std::string>();
    if (axis == "branching") b = static_cast<int>(r.axis_value);
    if (axis == "ham_t") ham_t = static_cast<int>(r.axis_value);
    std::string gen = c["input"].get<std::string>().empty() ? c["generator"].get<std::string>()
                                                              : c["input"].get<std::string>();
    if (gen.find(',') != std::string::npos) gen = "\"" + gen + "\"";
    out << kBenchSchema << "," << r.method << "," << axis << "," << num(r.axis_value) << "," << r.trial << ","
        << r.seed << "," << r.n << "," << r.k << "," << b << "," << ham_t << "," << gen << "," << r.k_effective
        << "," << num(r.error) << "," << r.error_kind << "," << (r.failure.empty() ? "ok" : "error") << ","
        << (timings ? num(r.seconds) : "") << "," << (timings ? std::to_string(r.max_rss_kb) : "") << "\n";
  }
  if (!out) throw Error(ErrorCode::IoError, "failed writing '" + path + "'");
}

}  // namespace esample
