#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "esample/partition.hpp"
#include "esample/random.hpp"

using namespace esample;

namespace {

std::vector<Point> uniform(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Point> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({rng.uniform(), rng.uniform()});
  rotate_for_general_position(out, seed);
  return out;
}

std::vector<Line> probes(std::size_t k, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Line> out;
  for (std::size_t i = 0; i < k; ++i) {
    Point a{rng.uniform(), rng.uniform()}, b{rng.uniform(), rng.uniform()};
    if (std::abs(a.x - b.x) < 1e-6) continue;
    out.push_back(line_through(a, b));
  }
  return out;
}

// Independent crossing test: a line crosses a bounded convex polygon iff
// polygon vertices lie strictly on both sides of it.
bool brute_crosses(const ConvexRegion& r, const Line& l) {
  bool above = false, below = false;
  for (const auto& v : r.vertices()) {
    double d = v.y - l(v.x);
    above |= d > 1e-9;
    below |= d < -1e-9;
  }
  return above && below;
}

void check_regions_hold_points(const Partition& part, const std::vector<Point>& pts) {
  for (const auto& cell : part.cells) {
    for (std::size_t i : cell.points) {
      CHECK(cell.region.contains(pts[i], Tolerance{1e-6, 1e-9}));
    }
  }
}

}  // namespace

TEST_CASE("quantile cut keeps exactly the requested count") {
  std::vector<Point> pts{{0, 0}, {1, 1}, {2, 2}, {3, 3}, {4, 4}};
  std::vector<std::size_t> idx{0, 1, 2, 3, 4}, rest;
  Line l = quantile_cut(pts, idx, 2, 0.0, rest);
  CHECK(idx == std::vector<std::size_t>{3, 4});
  CHECK(rest == std::vector<std::size_t>{0, 1, 2});
  CHECK(l.a == 0.0);
  CHECK(l.b == doctest::Approx(2.5));

  // Equal keys are split by input index.
  std::vector<Point> flat{{0, 1}, {1, 1}, {2, 1}};
  std::vector<std::size_t> all{2, 1, 0};
  quantile_cut(flat, all, 1, 0.0, rest);
  CHECK(all == std::vector<std::size_t>{0});
}

TEST_CASE("quota split sizes") {
  auto pts = uniform(103, 1);
  std::vector<std::size_t> idx(pts.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::vector<PartitionCell> out;
  quota_split(pts, ConvexRegion::box(padded_bounds(pts)), idx, 7, true, out);
  REQUIRE(out.size() == 7);
  std::size_t total = 0;
  for (const auto& c : out) {
    CHECK(c.points.size() >= 14);
    CHECK(c.points.size() <= 15);
    total += c.points.size();
  }
  CHECK(total == 103);
}

TEST_CASE("mat partition balance and cover") {
  auto pts = uniform(1024, 2);
  auto part = partition_mat(pts, 64, {}, 9);
  CHECK_NOTHROW(check_partition(part, pts.size(), 2 * 1024 / 64));
  CHECK(part.max_cell_size() <= 16);
  CHECK(part.point_count() == 1024);
  CHECK(part.method == "mat");
  check_regions_hold_points(part, pts);
  CHECK_THROWS_AS(partition_mat(pts, 1, {}, 1), Error);
  CHECK_THROWS_AS(partition_mat(pts, 2000, {}, 1), Error);
}

TEST_CASE("mat with other test sets") {
  auto pts = uniform(800, 3);
  for (auto m : {TestSetMethod::Dual, TestSetMethod::Points}) {
    MatParams p;
    p.test_set = m;
    auto part = partition_mat(pts, 32, p, 4);
    CHECK_NOTHROW(check_partition(part, pts.size(), 2 * 800 / 32));
  }
}

TEST_CASE("two points with t = 2") {
  std::vector<Point> two{{0, 0}, {1, 0.5}};
  auto part = partition_chan(two, 2, {}, 1);
  CHECK(part.cells.size() == 2);
  CHECK_NOTHROW(check_partition(part, 2, 1));
}

TEST_CASE("chan partition balance and cover") {
  auto pts = uniform(1024, 5);
  for (bool simple : {true, false}) {
    ChanParams p;
    p.simple = simple;
    auto part = partition_chan(pts, 64, p, 7);
    CHECK_NOTHROW(check_partition(part, pts.size(), 32));
    CHECK(part.max_cell_size() <= 16);
    CHECK(part.method == (simple ? "chan_simple" : "chan"));
    check_regions_hold_points(part, pts);
  }
}

TEST_CASE("determinism") {
  auto pts = uniform(600, 6);
  auto a = partition_chan(pts, 16, {}, 3);
  auto b = partition_chan(pts, 16, {}, 3);
  REQUIRE(a.cells.size() == b.cells.size());
  for (std::size_t i = 0; i < a.cells.size(); ++i) CHECK(a.cells[i].points == b.cells[i].points);
  auto c = partition_mat(pts, 16, {}, 3);
  auto d = partition_mat(pts, 16, {}, 3);
  REQUIRE(c.cells.size() == d.cells.size());
  for (std::size_t i = 0; i < c.cells.size(); ++i) CHECK(c.cells[i].points == d.cells[i].points);
}

TEST_CASE("chan weight update is monotone in crossings") {
  // One level of the simple variant by hand: weights grow by (1+1/b) per
  // crossed cell, so more crossings never means less weight.
  auto pts = uniform(500, 8);
  TestSet h = test_set_dual(pts, 16, 2);
  std::vector<PartitionCell> cells;
  std::vector<std::size_t> idx(pts.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  quota_split(pts, ConvexRegion::box(padded_bounds(pts)), idx, 16, true, cells);
  std::vector<std::size_t> count(h.lines.size(), 0);
  for (const auto& c : cells) {
    for (std::size_t id : h.crossing_ids(c.region)) {
      h.lines[id].weight *= 1.0 + 1.0 / 22.0;
      ++count[id];
    }
  }
  for (std::size_t i = 0; i < h.lines.size(); ++i) {
    CHECK(h.lines[i].weight >= 1.0);
    for (std::size_t j = 0; j < h.lines.size(); ++j) {
      if (count[i] > count[j]) CHECK(h.lines[i].weight >= h.lines[j].weight);
    }
  }
}

TEST_CASE("crossing profile") {
  Partition one;
  one.cells.push_back({ConvexRegion::box({0, 1, 0, 1}), {0}});
  std::vector<Line> ls{{0, 0.5}, {0, 5}};
  auto prof = crossing_profile(one, ls);
  CHECK(prof.max == 1);
  CHECK(prof.histogram == std::vector<std::size_t>{1, 1});
  CHECK(prof.mean == doctest::Approx(0.5));

  auto pts = uniform(1000, 10);
  auto part = partition_mat(pts, 64, {}, 1);
  REQUIRE(part.cells.size() <= 200);
  auto lines = probes(100, 11);
  auto got = crossing_profile(part, lines);
  std::size_t brute_max = 0;
  for (const auto& l : lines) {
    std::size_t c = 0;
    for (const auto& cell : part.cells) c += brute_crosses(cell.region, l);
    brute_max = std::max(brute_max, c);
  }
  CHECK(got.max == brute_max);
}

TEST_CASE("check_partition rejects bad covers") {
  Partition p;
  p.cells.push_back({ConvexRegion::plane(), {0, 1}});
  p.cells.push_back({ConvexRegion::plane(), {1}});
  CHECK_THROWS_AS(check_partition(p, 2, 5), Error);
  p.cells[1].points = {2};
  CHECK_THROWS_AS(check_partition(p, 2, 5), Error);
  p.cells.pop_back();
  CHECK_NOTHROW(check_partition(p, 2, 5));
  CHECK_THROWS_AS(check_partition(p, 2, 1), Error);
}
