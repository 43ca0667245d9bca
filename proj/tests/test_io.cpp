#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "esample/io.hpp"

using namespace esample;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "esample_test_io";
  fs::create_directories(dir);
  return dir / name;
}

std::string write_file(const std::string& name, const std::string& body) {
  auto p = scratch(name);
  std::ofstream(p, std::ios::binary) << body;
  return p.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("csv well formed") {
  auto path = write_file("ok.csv", "id,x,y,flag\n1,0.5,1.5,1\n2,\"2.0\",3,false\n3,-1e-3,+4,0\n");
  auto data = ingest_csv(path, "x", "y", {"flag"}, false);
  REQUIRE(data.points.size() == 3);
  CHECK(data.points[0] == Point{0.5, 1.5});
  CHECK(data.points[1] == Point{2.0, 3.0});
  CHECK(data.points[2] == Point{-1e-3, 4.0});
  CHECK(data.flags[0] == std::vector<char>{1, 0, 0});
  CHECK(data.bad_rows == 0);
  CHECK(data.rotation == 0.0);

  auto rotated = ingest_csv(path, "x", "y", {}, true, 5);
  CHECK(rotated.points.size() == 3);
  CHECK(rotated.rotation != 0.0);
}

TEST_CASE("csv bad rows") {
  std::string body = "x,y\n";
  for (int i = 0; i < 999; ++i) body += std::to_string(i) + "," + std::to_string(i * 2) + "\n";
  body += "oops,1\n";
  auto data = ingest_csv(write_file("one_bad.csv", body), "x", "y", {}, false);
  CHECK(data.points.size() == 999);
  CHECK(data.bad_rows == 1);
  CHECK(data.rows == 1000);

  auto many = write_file("many_bad.csv", "x,y\n1,2\nnan,3\n4,5\n");
  CHECK(code_of([&] { ingest_csv(many, "x", "y"); }) == ErrorCode::TooManyBadRows);
}

TEST_CASE("csv schema and io errors") {
  CHECK(code_of([&] { ingest_csv(write_file("empty.csv", ""), "x", "y"); }) == ErrorCode::SchemaError);
  CHECK(code_of([&] { ingest_csv(write_file("header.csv", "x,y\n"), "x", "y"); }) == ErrorCode::SchemaError);
  CHECK(code_of([&] { ingest_csv(write_file("cols.csv", "a,b\n1,2\n"), "x", "y"); }) == ErrorCode::SchemaError);
  CHECK(code_of([&] { ingest_csv(scratch("missing.csv").string(), "x", "y"); }) == ErrorCode::IoError);
}

TEST_CASE("generators") {
  CHECK(generate({}, 1, 3).size() == 1);
  auto a = generate({}, 10000, 42), b = generate({}, 10000, 42);
  CHECK(a == b);
  CHECK(a != generate({}, 10000, 43));
  for (const auto& p : a) CHECK((p.x >= 0 && p.x < 1 && p.y >= 0 && p.y < 1));

  auto spec = parse_generator("clusters");
  CHECK(spec.kind == GeneratorKind::GaussianClusters);
  CHECK(spec.clusters == 20);
  CHECK(spec.sigma == 0.02);
  auto custom = parse_generator("gaussian_clusters:c=5,sigma=0.1");
  CHECK(custom.clusters == 5);
  CHECK(custom.sigma == 0.1);
  CHECK(parse_generator(to_string(custom)).clusters == 5);
  CHECK(generate(custom, 500, 7) == generate(custom, 500, 7));

  auto ring = generate(parse_generator("annulus"), 2000, 1);
  for (const auto& p : ring) {
    double r = std::hypot(p.x - 0.5, p.y - 0.5);
    CHECK((r >= 0.3 - 1e-12 && r <= 0.5 + 1e-12));
  }
  CHECK_THROWS_AS(parse_generator("spiral"), Error);
  CHECK_THROWS_AS(parse_generator("uniform:c=3"), Error);
  CHECK_THROWS_AS(generate({}, 0, 1), Error);
}

TEST_CASE("json omits timings unless asked") {
  WeightedSample s;
  s.points = {{1, 2}};
  s.weights = {1.0};
  s.method = "random";
  s.k_requested = s.k_effective = 1;
  s.seconds = 0.25;
  CHECK(!to_json(s, false).contains("seconds"));
  CHECK(to_json(s, true)["seconds"] == 0.25);
  CHECK(to_json(s, false)["points"][0][2] == 1.0);
}

TEST_CASE("svg output") {
  Box view{0, 1, 0, 1};
  SvgLayer one;
  one.polygons.push_back({{0, 0}, {1, 0}, {1, 1}});
  auto path = scratch("one.svg").string();
  render_svg(one, view, path);
  std::string doc = slurp(path);
  std::size_t polys = 0;
  for (auto pos = doc.find("<polygon"); pos != std::string::npos; pos = doc.find("<polygon", pos + 1)) ++polys;
  CHECK(polys == 1);

  auto lines = random_lines(25, 3);
  auto c1 = create_cutting(lines, 5, {}, 9), c2 = create_cutting(lines, 5, {}, 9);
  auto p1 = scratch("c1.svg").string(), p2 = scratch("c2.svg").string();
  render_svg(svg_layer(c1, view, true), view, p1);
  render_svg(svg_layer(c2, view, true), view, p2);
  CHECK(slurp(p1) == slurp(p2));
  CHECK(slurp(p1).find("<line") != std::string::npos);

  CHECK(code_of([&] { render_svg(one, view, "/nonexistent_dir/x.svg"); }) == ErrorCode::IoError);
}
