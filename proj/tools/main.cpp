#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "esample/bench.hpp"
#include "esample/random.hpp"

using namespace esample;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kConfig = 2, kData = 3, kInternal = 4 };

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidR:
    case ErrorCode::InvalidT:
    case ErrorCode::InvalidK:
      return kConfig;
    case ErrorCode::InvariantViolation:
      return kInternal;
    default:
      return kData;
  }
}

struct Options {
  std::string method = "ham";
  std::size_t n = 10000;
  std::size_t k = 100;
  std::size_t t = 64;
  int b = 0;
  double r = 8.0;
  int ham_t = kDefaultHamT;
  std::string test_set = "lines";
  std::string cell = "poly8";
  std::uint64_t seed = 1;
  std::size_t trials = 1;
  std::string input;
  std::string x_col = "x";
  std::string y_col = "y";
  std::string generator = "uniform";
  std::string out;
  std::string svg;
  std::string json_out;
  std::string presample = "auto";
  std::string axis = "none";
  std::vector<double> values;
  std::size_t budget = 400;
  std::size_t net_size = kDefaultNetSize;
  std::size_t probes = 200;
  std::size_t jobs = 1;
  std::string what = "cutting";
  bool timings = false;
  bool lines_layer = false;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

RunConfig to_config(const Options& o, const std::string& command) {
  RunConfig cfg;
  cfg.command = command;
  cfg.input = o.input;
  cfg.x_col = o.x_col;
  cfg.y_col = o.y_col;
  cfg.generator = o.generator;
  cfg.methods.clear();
  for (const auto& m : split_list(o.method)) cfg.methods.push_back(parse_sample_method(m));
  cfg.n = o.n;
  cfg.k = o.k;
  cfg.t = o.t;
  cfg.b = o.b;
  cfg.r = o.r;
  cfg.ham_t = o.ham_t;
  cfg.test_set = parse_test_set_method(o.test_set);
  cfg.cell = CellKind::parse(o.cell);
  cfg.presample = parse_presample(o.presample);
  cfg.seed = o.seed;
  cfg.trials = o.trials;
  cfg.axis = parse_sweep_axis(o.axis);
  cfg.values = o.values;
  cfg.error_budget = o.budget;
  cfg.jobs = o.jobs;
  cfg.validate();
  return cfg;
}

SampleMethod single_method(const RunConfig& cfg) {
  if (cfg.methods.size() != 1) throw Error(ErrorCode::InvalidArgument, "this command takes one method");
  return cfg.methods.front();
}

std::vector<Point> load_points(const RunConfig& cfg) {
  if (!cfg.input.empty()) {
    auto data = ingest_csv(cfg.input, cfg.x_col, cfg.y_col, {}, true, cfg.seed);
    if (data.bad_rows > 0) {
      std::cerr << "warning: skipped " << data.bad_rows << " malformed rows of " << data.rows << "\n";
    }
    return std::move(data.points);
  }
  return generate(parse_generator(cfg.generator), cfg.n, cfg.seed);
}

void emit(const json& j, const std::string& path) {
  std::string text = j.dump(2) + "\n";
  std::cout << text;
  if (!path.empty()) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  }
}

const Box kLineView{-0.25, 1.25, -0.25, 1.25};

json run_cutting(const Options& o, const RunConfig& cfg, bool render_only) {
  auto lines = random_lines(cfg.n, cfg.seed);
  auto c = create_cutting(lines, cfg.r, CuttingOptions(cfg.cell), cfg.seed);
  json j = to_json(c.metrics());
  j["config"] = cfg.to_json();
  j["crossing_bound"] = c.total_weight / c.r;
  j["brute_max_crossing"] = brute_max_crossing(c);
  if (o.timings) j["seconds"] = c.seconds;
  if (!o.svg.empty()) {
    auto layer = svg_layer(c, kLineView, o.lines_layer || render_only);
    render_svg(layer, kLineView, o.svg);
    j["svg"] = {{"path", o.svg}, {"polygons", layer.polygons.size()}};
  }
  return j;
}

std::vector<Line> probe_lines(std::span<const Point> pts, std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Line> out;
  for (std::size_t tries = 0; out.size() < count && tries < 20 * count + 100; ++tries) {
    const Point& p = pts[rng.below(pts.size())];
    const Point& q = pts[rng.below(pts.size())];
    if (p.x == q.x) continue;
    out.push_back(line_through(p, q));
  }
  return out;
}

json run_partition(const Options& o, const RunConfig& cfg, bool render_only) {
  auto pts = load_points(cfg);
  auto part = make_partition(pts, single_method(cfg), cfg.t, cfg, cfg.seed);
  std::size_t bound = 2 * pts.size() / cfg.t;
  check_partition(part, pts.size(), std::max<std::size_t>(bound, 1));
  auto profile = crossing_profile(part, probe_lines(pts, o.probes, cfg.seed + 1));
  Box view = padded_bounds(pts, 0.02);
  json j = {{"config", cfg.to_json()},
            {"method", part.method},
            {"n", pts.size()},
            {"t", part.t},
            {"cells", part.cells.size()},
            {"max_cell_size", part.max_cell_size()},
            {"cell_size_bound", bound},
            {"probe_crossings", {{"max", profile.max}, {"mean", profile.mean}}}};
  if (o.timings) j["seconds"] = part.stats.seconds;
  if (!o.json_out.empty() && !render_only) {
    std::ofstream out(o.json_out, std::ios::binary);
    if (!out || !(out << to_json(part, view, o.timings).dump() << "\n")) {
      throw Error(ErrorCode::IoError, "cannot write '" + o.json_out + "'");
    }
  }
  if (!o.svg.empty()) {
    auto layer = svg_layer(part, pts, view);
    render_svg(layer, view, o.svg);
    j["svg"] = {{"path", o.svg}, {"polygons", layer.polygons.size()}};
  }
  return j;
}

json run_sample(const Options& o, const RunConfig& cfg) {
  auto pts = load_points(cfg);
  auto s = epsilon_sample(pts, cfg.k, single_method(cfg), sample_options(cfg), cfg.seed);
  json j = to_json(s, o.timings);
  j["config"] = cfg.to_json();
  return j;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

json run_evaluate(const Options& o, const RunConfig& cfg) {
  auto pts = load_points(cfg);
  auto method = single_method(cfg);
  json trials = json::array();
  std::vector<double> errors;
  for (std::size_t i = 0; i < cfg.trials; ++i) {
    std::uint64_t seed = cfg.seed + i;
    auto s = epsilon_sample(pts, cfg.k, method, sample_options(cfg), seed);
    auto err = measure_error(pts, s, cfg.error_budget, seed);
    errors.push_back(err.value);
    json t = {{"seed", seed}, {"k_effective", s.k_effective}, {"error", err.value}, {"error_kind", err.kind}};
    if (o.timings) t["seconds"] = s.seconds;
    trials.push_back(std::move(t));
  }
  return {{"config", cfg.to_json()},
          {"method", to_string(method)},
          {"n", pts.size()},
          {"k", cfg.k},
          {"median_error", median(errors)},
          {"trials", std::move(trials)}};
}

json run_anomaly(const Options& o, const RunConfig& cfg) {
  auto pts = load_points(cfg);
  auto method = single_method(cfg);
  auto data = plant_anomaly(pts, {}, cfg.seed);
  std::vector<Point> measured, baseline;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (data.measured[i]) measured.push_back(pts[i]);
    if (data.baseline[i]) baseline.push_back(pts[i]);
  }
  auto draw = [&](const std::vector<Point>& set, std::uint64_t seed) {
    std::size_t k = std::min(cfg.k, set.size());
    if (k < 2) throw Error(ErrorCode::TooFewPoints, "labeled set too small to sample");
    return epsilon_sample(set, k, method, sample_options(cfg), seed);
  };
  auto ms = draw(measured, cfg.seed + 1);
  auto bs = draw(baseline, cfg.seed + 2);
  auto res = scan_discrepancy(data, ms, bs, o.net_size, cfg.seed + 3);
  json j = to_json(res, o.timings);
  j["config"] = cfg.to_json();
  j["method"] = to_string(method);
  j["net_size"] = o.net_size;
  j["inside_count"] = data.inside_count;
  j["sample_sizes"] = {ms.k_effective, bs.k_effective};
  if (o.timings) j["sample_seconds"] = ms.seconds + bs.seconds;
  return j;
}

json run_bench(const Options& o, const RunConfig& cfg) {
  auto records = run_experiment(cfg);
  if (!o.out.empty()) write_bench_csv(records, o.out, o.timings);
  json all = json::array();
  std::size_t failures = 0;
  for (const auto& r : records) {
    all.push_back(r.to_json(o.timings));
    failures += !r.failure.empty();
  }
  if (!o.json_out.empty()) {
    std::ofstream out(o.json_out, std::ios::binary);
    if (!out || !(out << all.dump(2) << "\n")) throw Error(ErrorCode::IoError, "cannot write '" + o.json_out + "'");
  }
  return {{"schema", kBenchSchema}, {"config", cfg.to_json()}, {"records", all}, {"failures", failures}};
}

void apply_env_tolerance() {
  const char* env = std::getenv("ESAMPLE_TOLERANCE");
  if (!env || !*env) return;
  auto parts = split_list(env);
  Tolerance tol;
  try {
    if (parts.empty() || parts.size() > 2) throw std::invalid_argument("count");
    tol.rel_tol = std::stod(parts[0]);
    if (parts.size() == 2) tol.abs_tol = std::stod(parts[1]);
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::InvalidArgument, "ESAMPLE_TOLERANCE must be '<rel>[,<abs>]'");
  }
  set_default_tolerance(tol);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Epsilon-samples for halfplanes via low-crossing partitions"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--method", o.method, "random, mat, chan, chan_simple, ham, double_ham (bench: comma list)");
    sub->add_option("--n", o.n, "Points (or lines for cutting) to generate");
    sub->add_option("--k", o.k, "Sample size");
    sub->add_option("--t", o.t, "Partition cell count");
    sub->add_option("--b", o.b, "Branching factor for mat/chan (0 keeps the default)");
    sub->add_option("--r", o.r, "Cutting parameter");
    sub->add_option("--ham-t", o.ham_t, "Ham-sandwich candidate sample size");
    sub->add_option("--test-set", o.test_set, "lines, points or dual");
    sub->add_option("--cell", o.cell, "poly4, poly8 or trapezoid");
    sub->add_option("--seed", o.seed, "Random seed");
    sub->add_option("--trials", o.trials, "Repetitions");
    sub->add_option("--input", o.input, "CSV file of points");
    sub->add_option("--x-col", o.x_col, "CSV x column");
    sub->add_option("--y-col", o.y_col, "CSV y column");
    sub->add_option("--generator", o.generator, "uniform, annulus, clusters[:c=20,sigma=0.02]");
    sub->add_option("--out", o.out, "Output file");
    sub->add_option("--svg", o.svg, "SVG output file");
    sub->add_option("--presample", o.presample, "auto, on or off");
    sub->add_flag("--timings", o.timings, "Include wall-clock fields in the output");
  };

  auto* cutting = app.add_subcommand("cutting", "Build a cutting of random lines");
  add_common(cutting);
  cutting->add_flag("--lines", o.lines_layer, "Draw the input lines in the SVG");

  auto* partition = app.add_subcommand("partition", "Partition points into cells");
  add_common(partition);
  partition->add_option("--json", o.json_out, "Write every cell with its vertices and points");
  partition->add_option("--probes", o.probes, "Probe lines for the crossing count");

  auto* sample = app.add_subcommand("sample", "Draw a weighted epsilon-sample");
  add_common(sample);

  auto* evaluate = app.add_subcommand("evaluate", "Measure the halfplane error of samples");
  add_common(evaluate);
  evaluate->add_option("--budget", o.budget, "Pivot budget when the exact error is too costly");

  auto* anomaly = app.add_subcommand("anomaly", "Plant a halfplane anomaly and scan samples for it");
  add_common(anomaly);
  anomaly->add_option("--net-size", o.net_size, "Net points bounding candidate halfplanes");

  auto* bench = app.add_subcommand("bench", "Run an experiment grid");
  add_common(bench);
  bench->add_option("--axis", o.axis, "none, branching, input_size, output_size, ham_t");
  bench->add_option("--values", o.values, "Values of the swept axis")->delimiter(',');
  bench->add_option("--budget", o.budget, "Pivot budget when the exact error is too costly");
  bench->add_option("--json", o.json_out, "Write the records as JSON");
  bench->add_option("--jobs", o.jobs, "Worker threads");

  auto* render = app.add_subcommand("render", "Render a cutting or partition as SVG");
  add_common(render);
  render->add_option("--what", o.what, "cutting or partition")->check(CLI::IsMember({"cutting", "partition"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    apply_env_tolerance();
    std::string command = app.get_subcommands().front()->get_name();
    RunConfig cfg = to_config(o, command);
    json result;
    if (command == "cutting") {
      result = run_cutting(o, cfg, false);
    } else if (command == "partition") {
      result = run_partition(o, cfg, false);
    } else if (command == "sample") {
      result = run_sample(o, cfg);
    } else if (command == "evaluate") {
      result = run_evaluate(o, cfg);
    } else if (command == "anomaly") {
      result = run_anomaly(o, cfg);
    } else if (command == "bench") {
      result = run_bench(o, cfg);
    } else {
      if (o.svg.empty()) throw Error(ErrorCode::InvalidArgument, "render needs --svg");
      result = o.what == "cutting" ? run_cutting(o, cfg, true) : run_partition(o, cfg, true);
    }
    emit(result, command == "bench" ? "" : o.out);
    if (command == "bench" && result["failures"].get<std::size_t>() > 0) return kData;
    return kOk;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}
