#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "esample/random.hpp"
#include "esample/region.hpp"

using namespace esample;

TEST_CASE("box basics") {
  auto r = ConvexRegion::box({0, 2, 0, 1});
  CHECK(r.bounded());
  CHECK(r.side_count() == 4);
  CHECK(r.vertices().size() == 4);
  CHECK(r.area() == doctest::Approx(2.0));
  CHECK(r.contains({1, 0.5}));
  CHECK(r.contains({0, 0}));
  CHECK_FALSE(r.contains({3, 0.5}));
  CHECK(r.classify({0, -1}) == Side::Above);
  CHECK(r.classify({0, 0}) == Side::Above);
  CHECK_FALSE(r.strictly_above({0, 0}));
  CHECK(r.classify({0, 2}) == Side::Below);
  CHECK(r.classify({1, -0.5}) == Side::Crosses);
}

TEST_CASE("plane clipping") {
  auto p = ConvexRegion::plane();
  CHECK_FALSE(p.bounded());
  CHECK(p.side_count() == 0);
  auto up = p.clip({0, 0}, true, 3);
  REQUIRE(up);
  CHECK(up->side_count() == 1);
  CHECK(up->contains({5, 0}));
  CHECK(up->contains({0, 1}));
  CHECK_FALSE(up->contains({0, -1}));
  CHECK(up->classify({0, 0}) == Side::Above);
  auto wedge = up->clip({1, 0}, false, 4);
  REQUIRE(wedge);
  CHECK(wedge->side_count() == 2);
  std::vector<std::pair<int, int>> sv;
  wedge->source_vertices(sv);
  REQUIRE(sv.size() == 1);
  CHECK(sv[0] == std::pair<int, int>{3, 4});
  CHECK_FALSE(p.clip({0, 0}, true)->clip({0, -1}, false));
}

TEST_CASE("clip area oracle against shoelace of half-square") {
  auto r = ConvexRegion::box({0, 2, 0, 2});
  auto below = r.clip({1, 0}, false);
  auto above = r.clip({1, 0}, true);
  REQUIRE(below);
  REQUIRE(above);
  CHECK(below->area() == doctest::Approx(2.0));
  CHECK(above->area() == doctest::Approx(2.0));
  CHECK(below->side_count() == 3);
  CHECK(above->side_count() == 3);
  auto t = r.clip({2, -1}, true);
  REQUIRE(t);
  CHECK(t->side_count() == 4);
}

// Monte Carlo containment oracle: a clipped region contains exactly the
// points inside the original region and the halfplane.
TEST_CASE("random clip sequences agree with halfplane membership") {
  Rng rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    auto r = std::optional<ConvexRegion>(ConvexRegion::plane());
    std::vector<std::pair<Line, bool>> cuts;
    for (int i = 0; i < 6 && r; ++i) {
      Point c{rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3)};
      double a = rng.uniform(-3, 3);
      Line l{a, c.y - a * c.x};
      bool up = rng.bernoulli(0.5);
      auto next = r->clip(l, up, i);
      if (!next) continue;
      r = next;
      cuts.push_back({l, up});
    }
    REQUIRE(r);
    for (int j = 0; j < 300; ++j) {
      Point p{rng.uniform(-2, 2), rng.uniform(-2, 2)};
      bool inside = true;
      bool near = false;
      for (auto& [l, up] : cuts) {
        double d = p.y - l(p.x);
        if (std::abs(d) < 1e-7) near = true;
        if (up ? d < 0 : d > 0) inside = false;
      }
      if (!near) CHECK(r->contains(p) == inside);
    }
  }
}

TEST_CASE("clip_line and intersect") {
  auto r = ConvexRegion::box({0, 2, 0, 2});
  auto s = r.clip_line({1, 0});
  REQUIRE(s);
  CHECK(s->x_lo == doctest::Approx(0));
  CHECK(s->x_hi == doctest::Approx(2));
  CHECK_FALSE(r.clip_line({0, 3}));
  auto s2 = r.clip_line({0, 2});  // along the top edge
  REQUIRE(s2);
  auto a = ConvexRegion::box({0, 2, 0, 2});
  auto b = ConvexRegion::box({1, 3, 1, 3});
  auto c = a.intersect(b);
  REQUIRE(c);
  CHECK(c->area() == doctest::Approx(1.0));
  CHECK_FALSE(a.intersect(ConvexRegion::box({5, 6, 5, 6})));
}

TEST_CASE("regular polygon side counts") {
  const int n = 14;
  auto r = std::optional<ConvexRegion>(ConvexRegion::plane());
  for (int i = 0; i < n; ++i) {
    double th0 = 2 * std::numbers::pi * (i + 0.3) / n;
    double th1 = 2 * std::numbers::pi * (i + 1.3) / n;
    Point p{std::cos(th0), std::sin(th0)}, q{std::cos(th1), std::sin(th1)};
    Line l = line_through(p, q);
    r = r->clip(l, l(0) < 0, i);  // keep the origin's side
    REQUIRE(r);
  }
  CHECK(r->side_count() == n);
  CHECK(r->vertices().size() == n);
  double area = 0.5 * n * std::sin(2 * std::numbers::pi / n);
  CHECK(r->area() == doctest::Approx(area).epsilon(1e-9));
}

TEST_CASE("outline clips unbounded regions") {
  auto up = ConvexRegion::plane().clip({0, 0}, true);
  auto o = up->outline({-1, 1, -1, 1});
  CHECK(o.size() == 4);
}
