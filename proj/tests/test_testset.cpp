#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "esample/random.hpp"
#include "esample/testset.hpp"

using namespace esample;

namespace {

std::vector<Point> uniform(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Point> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({rng.uniform(), rng.uniform()});
  return out;
}

std::size_t incident(const Line& l, const std::vector<Point>& pts) {
  std::size_t k = 0;
  for (const auto& p : pts) k += side_of(p, l, {1e-7, 1e-9}) == 0;
  return k;
}

}  // namespace

TEST_CASE("lines method") {
  std::vector<Point> two{{0, 0}, {1, 2}};
  auto ts = test_set_lines(two, 1, 3);
  REQUIRE_FALSE(ts.lines.empty());
  for (const auto& wl : ts.lines) {
    CHECK(approx_eq(wl.line, Line{2, 0}));
    CHECK(wl.weight == 1.0);
  }
  CHECK(test_set_lines_size(1000, 16) == 764);
  auto pts = uniform(1000, 1);
  auto big = test_set_lines(pts, 16, 5);
  CHECK(big.lines.size() == 764);
  for (const auto& wl : big.lines) CHECK(incident(wl.line, pts) >= 2);
  CHECK_THROWS_AS(test_set_lines(std::vector<Point>{{0, 0}}, 2, 1), Error);
}

TEST_CASE("points method") {
  std::vector<Point> two{{0, 0}, {1, 2}};
  CHECK(test_set_points(two, 4, 1).lines.size() == 1);
  auto pts = uniform(100, 2);
  TestSetConstants c;
  c.c_points = 10.0 / std::log(100.0) * (1 - 1e-12);
  CHECK(test_set_points_sample(100, 1, c.c_points) == 10);
  auto ts = test_set_points(pts, 1, 7, c);
  CHECK(ts.lines.size() == 45);
  for (const auto& wl : ts.lines) CHECK(incident(wl.line, pts) >= 2);
  CHECK_THROWS_AS(test_set_points(std::vector<Point>{}, 2, 1), Error);
}

TEST_CASE("dual method") {
  std::vector<Point> two{{0, 0}, {1, 2}};
  auto small = test_set_dual(two, 4, 1);
  CHECK(small.lines.size() >= 1);

  auto pts = uniform(10000, 3);
  auto ts = test_set_dual(pts, 64, 11);
  CHECK(ts.lines.size() >= 1);
  CHECK(ts.lines.size() <= 16 * 64);
  CHECK(ts.dual_vertices == ts.lines.size());
  REQUIRE(ts.dual_tree);
  CHECK(ts.dual_tree->total_points() == ts.lines.size());
  for (const auto& wl : ts.lines) CHECK(incident(wl.line, pts) >= 2);
  CHECK_THROWS_AS(test_set_dual(std::vector<Point>{{1, 1}}, 4, 1), Error);
}

TEST_CASE("dual crossing ids match brute force") {
  auto pts = uniform(2000, 4);
  auto ts = test_set_dual(pts, 64, 2);
  Rng rng(8);
  for (int q = 0; q < 30; ++q) {
    double x0 = rng.uniform(0, 0.8), y0 = rng.uniform(0, 0.8);
    auto region = ConvexRegion::box({x0, x0 + 0.2, y0, y0 + 0.2});
    auto cut = region.clip({rng.uniform(-1, 1), y0 + 0.1 - x0 * 0.3}, rng.bernoulli(0.5));
    if (!cut) continue;
    auto ids = ts.crossing_ids(*cut);
    std::vector<std::size_t> brute;
    for (std::size_t i = 0; i < ts.lines.size(); ++i) {
      if (cut->classify(ts.lines[i].line) == Side::Crosses) brute.push_back(i);
    }
    CHECK(ids == brute);
  }
}

TEST_CASE("method names") {
  CHECK(parse_test_set_method("dual") == TestSetMethod::Dual);
  CHECK(to_string(TestSetMethod::Points) == "points");
  CHECK_THROWS_AS(parse_test_set_method("nope"), Error);
}
