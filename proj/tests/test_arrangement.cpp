#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include "esample/arrangement.hpp"
#include "esample/random.hpp"

using namespace esample;

namespace {

Line random_line_through_box(Rng& rng, double half = 1.0) {
  Point c{rng.uniform(-half, half), rng.uniform(-half, half)};
  double a = std::tan(rng.uniform(-1.4, 1.4));
  return {a, c.y - a * c.x};
}

// Splits random leaves by random lines that cross them.
ArrangementTree random_tree(CellKind kind, int splits, Rng& rng) {
  ArrangementTree tree(kind);
  int done = 0;
  while (done < splits) {
    Line l = random_line_through_box(rng);
    auto z = tree.zone(l);
    if (z.empty()) continue;
    int leaf = z[rng.below(z.size())];
    tree.split_leaf(leaf, l, done);
    ++done;
  }
  return tree;
}

std::vector<int> brute_zone(const ArrangementTree& t, const Line& l) {
  std::vector<int> out;
  for (int leaf : t.leaves()) {
    if (t.node(leaf).region.classify(l) == Side::Crosses) out.push_back(leaf);
  }
  return out;
}

}  // namespace

TEST_CASE("plane split and closed-above tie rule") {
  ArrangementTree t;
  t.add_lines(std::vector<WeightedLine>{{{0, 0}, 1.0}});
  CHECK(t.node(0).crossing.size() == 1);
  auto leaves = t.split_leaf(0, {0, 0}, 0);
  REQUIRE(leaves.size() == 2);
  int lo = t.node(0).lo, hi = t.node(0).hi;
  CHECK(t.locate({0, 1}) == hi);
  CHECK(t.locate({0, -1}) == lo);
  CHECK(t.locate({5, 0}) == hi);
  CHECK(t.node(lo).crossing.empty());
  CHECK(t.node(hi).crossing.empty());
  CHECK_THROWS_AS(t.split_leaf(hi, {0, -1}), Error);
}

TEST_CASE("trapezoid split into four") {
  ArrangementTree t(CellKind::trapezoid(), ConvexRegion::box({0, 2, 0, 2}));
  std::vector<Point> pts;
  Rng rng(2);
  for (int i = 0; i < 200; ++i) pts.push_back({rng.uniform(0, 2), rng.uniform(0, 2)});
  t.insert_points(pts);
  auto leaves = t.split_leaf(0, {2, -1});
  CHECK(leaves.size() == 4);
  std::size_t total = 0;
  double area = 0;
  for (int leaf : leaves) {
    total += t.node(leaf).points.size();
    CHECK(t.node(leaf).region.side_count() <= 4);
    area += t.node(leaf).region.area();
  }
  CHECK(total == 200);
  CHECK(t.total_points() == 200);
  CHECK(area == doctest::Approx(4.0));
  // The diagonal passes through two corners, so only two triangles arise.
  ArrangementTree d(CellKind::trapezoid(), ConvexRegion::box({0, 2, 0, 2}));
  CHECK(d.split_leaf(0, {1, 0}).size() == 2);
}

TEST_CASE("oversized polygon is re-split by chords") {
  const int n = 14;
  std::optional<ConvexRegion> r = ConvexRegion::plane();
  for (int i = 0; i < n; ++i) {
    double t0 = 2 * std::numbers::pi * (i + 0.3) / n, t1 = 2 * std::numbers::pi * (i + 1.3) / n;
    Line l = line_through({std::cos(t0), std::sin(t0)}, {std::cos(t1), std::sin(t1)});
    r = r->clip(l, l(0) < 0, i);
  }
  REQUIRE(r->side_count() == n);
  ArrangementTree t(CellKind::polygon(8), *r);
  // Cut off one corner: the far side keeps 15 sides and must be repaired.
  auto v = r->vertices();
  Point a{0.9 * v[0].x + 0.1 * v[1].x, 0.9 * v[0].y + 0.1 * v[1].y};
  Point b{0.9 * v[0].x + 0.1 * v.back().x, 0.9 * v[0].y + 0.1 * v.back().y};
  auto leaves = t.split_leaf(0, line_through(a, b));
  CHECK(leaves.size() >= 3);
  double area = 0;
  for (int leaf : leaves) {
    CHECK(t.node(leaf).region.side_count() <= 8);
    area += t.node(leaf).region.area();
  }
  CHECK(area == doctest::Approx(r->area()));
  CHECK(t.leaves().size() == leaves.size());
}

TEST_CASE("zone agrees with brute force") {
  for (auto kind : {CellKind::polygon(8), CellKind::polygon(4), CellKind::trapezoid()}) {
    Rng rng(17);
    auto t = random_tree(kind, 100, rng);
    for (int q = 0; q < 20; ++q) {
      Line l = random_line_through_box(rng, 1.5);
      auto z = t.zone(l);
      auto b = brute_zone(t, l);
      std::sort(z.begin(), z.end());
      CHECK(z == b);
    }
    ArrangementTree fresh(kind);
    CHECK(fresh.zone({3, 1}).size() == 1);
  }
}

TEST_CASE("zone after a single split") {
  ArrangementTree t;
  t.split_leaf(0, {0, 0});
  auto z = t.zone({0, 1});
  REQUIRE(z.size() == 1);
  CHECK(z[0] == t.node(0).hi);
}

TEST_CASE("leaves partition the plane and locate agrees with a scan") {
  for (auto kind : {CellKind::polygon(8), CellKind::trapezoid()}) {
    Rng rng(99);
    auto t = random_tree(kind, 100, rng);
    auto leaves = t.leaves();
    int ambiguous = 0;
    for (int i = 0; i < 10000; ++i) {
      Point p{rng.uniform(-3, 3), rng.uniform(-3, 3)};
      int loc = t.locate(p);
      CHECK(t.node(loc).region.contains(p));
      int claims = 0;
      for (int leaf : leaves) claims += t.node(leaf).region.contains(p) ? 1 : 0;
      if (claims != 1) ++ambiguous;
    }
    // Only points within tolerance of a boundary may be claimed twice.
    CHECK(ambiguous == 0);
  }
}

TEST_CASE("insert, count invariants and removal") {
  Rng rng(4);
  auto t = random_tree(CellKind::polygon(8), 100, rng);
  t.insert_points(std::vector<Point>{});
  CHECK(t.total_points() == 0);
  std::vector<Point> pts;
  for (int i = 0; i < 1000; ++i) pts.push_back({rng.uniform(-2, 2), rng.uniform(-2, 2)});
  t.insert_points(pts);
  CHECK(t.total_points() == 1000);
  std::map<int, std::size_t> expect;
  for (const auto& p : pts) ++expect[t.locate(p)];
  std::size_t sum = 0;
  for (int leaf : t.leaves()) {
    CHECK(t.node(leaf).points.size() == expect[leaf]);
    sum += t.node(leaf).points.size();
  }
  CHECK(sum == 1000);
  CHECK(t.remove_point(pts[5], 5));
  CHECK_FALSE(t.remove_point(pts[5], 5));
  CHECK(t.total_points() == 999);

  ArrangementTree one;
  one.insert_points(std::vector<Point>{{1, 2}});
  CHECK(one.node(0).points.size() == 1);
}

TEST_CASE("count_in_wedge agrees with brute force") {
  Rng rng(8);
  auto t = random_tree(CellKind::polygon(8), 60, rng);
  ArrangementTree empty;
  CHECK(empty.count_in_wedge({{0, 0}, {1, 0}, {-1, 0}}) == 0);
  std::vector<Point> pts;
  for (int i = 0; i < 500; ++i) pts.push_back({rng.uniform(-2, 2), rng.uniform(-2, 2)});
  t.insert_points(pts);
  for (int q = 0; q < 50; ++q) {
    Point p{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    Point r{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    if (p.x > r.x) std::swap(p, r);
    auto w = dualize_segment({line_through(p, r), p.x, r.x});
    for (Mode mode : {Mode::Closed, Mode::Open}) {
      std::size_t brute = 0;
      for (const auto& x : pts) brute += w.contains(x, mode) ? 1 : 0;
      CHECK(t.count_in_wedge(w, mode) == brute);
      std::vector<std::size_t> ids;
      t.collect_between(w.upper, w.lower, mode, ids);
      CHECK(ids.size() == brute);
    }
  }
  // A degenerate wedge holds exactly the points on its line.
  Line l{0.5, 0.25};
  t.insert({{1.0, 0.75}, 9999});
  CHECK(t.count_between(l, l, Mode::Closed) == 1);
}

TEST_CASE("crossing records match brute force") {
  Rng rng(12);
  ArrangementTree t(CellKind::polygon(8));
  std::vector<WeightedLine> lines;
  for (int i = 0; i < 40; ++i) lines.push_back({random_line_through_box(rng), 1.0 + i % 3});
  t.add_lines(lines);
  for (int s = 0; s < 30; ++s) {
    auto leaves = t.leaves();
    int leaf = leaves[rng.below(leaves.size())];
    const auto& n = t.node(leaf);
    if (n.crossing.empty()) continue;
    int line = n.crossing[rng.below(n.crossing.size())].line;
    t.split_leaf(leaf, lines[static_cast<std::size_t>(line)].line, line);
  }
  for (int leaf : t.leaves()) {
    std::set<int> expect;
    double w = 0;
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (t.node(leaf).region.classify(lines[i].line) == Side::Crosses) {
        expect.insert(static_cast<int>(i));
        w += lines[i].weight;
      }
    }
    std::set<int> got;
    for (const auto& c : t.node(leaf).crossing) got.insert(c.line);
    CHECK(got == expect);
    CHECK(t.node(leaf).crossing_weight == doctest::Approx(w));
  }
}
