#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "esample/geometry.hpp"
#include "esample/random.hpp"

using namespace esample;

TEST_CASE("approx_eq") {
  CHECK(approx_eq(1.0, 1.0));
  CHECK(approx_eq(1.0, 1.0 + 1e-15));
  CHECK_FALSE(approx_eq(1.0, 1.001));
  CHECK(approx_eq(1.0, 1.0 + 1e-15) == approx_eq(1.0 + 1e-15, 1.0));
  CHECK_FALSE(approx_eq(1.0, kInf));
  CHECK(approx_eq(kInf, kInf));
}

TEST_CASE("tolerance validation") {
  CHECK_THROWS_AS(Tolerance({0.0, 1e-12}).validate(), Error);
  CHECK_NOTHROW(Tolerance{}.validate());
}

TEST_CASE("line_through") {
  auto l = line_through({0, 0}, {1, 1});
  CHECK(approx_eq(l, Line{1, 0}));
  auto h = line_through({0, 2}, {2, 2});
  CHECK(approx_eq(h, Line{0, 2}));
  try {
    line_through({0, 0}, {0, 1});
    FAIL("expected DegenerateLine");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateLine);
  }
  CHECK_THROWS_AS(line_through({3, 3}, {3, 3}), Error);
}

TEST_CASE("classify examples") {
  Segment s{{0, 1}, 0, 1};
  CHECK(classify(s, {0, 0}, Mode::Closed) == Side::Above);
  CHECK(classify(s, {0, 0}, Mode::Open) == Side::Above);
  Segment d{{1, 0}, 0, 1};
  CHECK(classify(d, {0, 0}, Mode::Closed) == Side::Above);
  CHECK(classify(d, {0, 0}, Mode::Open) == Side::Crosses);
  Segment c{{1, 0}, -1, 1};
  CHECK(classify(c, {0, 0}, Mode::Closed) == Side::Crosses);
  CHECK(classify(c, {0, 0}, Mode::Open) == Side::Crosses);
  // Unbounded: y = x crosses y = 0 but y = 1 over [0, inf) does not.
  CHECK(classify(Segment::full({1, 0}), {0, 0}, Mode::Closed) == Side::Crosses);
  CHECK(classify(Segment{{0, 1}, 0, kInf}, {0, 0}, Mode::Open) == Side::Above);
}

TEST_CASE("classify mirror antisymmetry") {
  Rng rng(7);
  auto mirror = [](Side s) {
    return s == Side::Above ? Side::Below : s == Side::Below ? Side::Above : s;
  };
  for (int i = 0; i < 500; ++i) {
    Line a{rng.uniform(-3, 3), rng.uniform(-3, 3)};
    Line l{rng.uniform(-3, 3), rng.uniform(-3, 3)};
    double x0 = rng.uniform(-2, 2), x1 = x0 + rng.uniform(0.1, 2);
    Segment s{a, x0, x1};
    Segment ms{{-a.a, -a.b}, x0, x1};
    Line ml{-l.a, -l.b};
    CHECK(classify(ms, ml, Mode::Open) == mirror(classify(s, l, Mode::Open)));
  }
}

TEST_CASE("segment_intersection") {
  auto p = segment_intersection({{1, 0}, -1, 1}, {{-1, 0}, -1, 1});
  REQUIRE(p);
  CHECK(approx_eq(*p, Point{0, 0}));
  CHECK_FALSE(segment_intersection({{1, 0}, 2, 3}, {{-1, 0}, -1, 1}));
  CHECK_FALSE(segment_intersection(Segment::full({1, 1}), Segment::full({1, 2})));
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    Segment s{{rng.uniform(-2, 2), rng.uniform(-1, 1)}, -1, rng.uniform(-0.5, 1)};
    Segment t{{rng.uniform(-2, 2), rng.uniform(-1, 1)}, rng.uniform(-1, 0.5), 1};
    auto a = segment_intersection(s, t);
    auto b = segment_intersection(t, s);
    REQUIRE(a.has_value() == b.has_value());
    if (a) CHECK(*a == *b);
  }
}

TEST_CASE("duality") {
  CHECK(dualize_point({1, 0}) == Line{1, 0});
  CHECK(dualize_line(dualize_point({1, 0})) == Point{1, 0});
  CHECK(dualize_point({0, 0}) == Line{0, 0});
  Rng rng(11);
  int agree = 0;
  for (int i = 0; i < 50; ++i) {
    Point p{rng.uniform(-5, 5), rng.uniform(-5, 5)};
    Line l{rng.uniform(-5, 5), rng.uniform(-5, 5)};
    CHECK(approx_eq(dualize_line(dualize_point(p)), p));
    int primal = side_of(p, l);
    int dual = side_of(dualize_line(l), dualize_point(p));
    if (primal == dual) ++agree;
  }
  CHECK(agree == 50);
}

TEST_CASE("wedge incidence matches segment crossing") {
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    Point p{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    Point q{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    if (p.x > q.x) std::swap(p, q);
    Segment s{line_through(p, q), p.x, q.x};
    auto w = dualize_segment(s);
    CHECK(approx_eq(w.apex, dualize_line(s.line)));
    CHECK(side_of(w.apex, w.upper) == 0);
    CHECK(side_of(w.apex, w.lower) == 0);
    for (int j = 0; j < 100; ++j) {
      Line g{rng.uniform(-3, 3), rng.uniform(-2, 2)};
      bool crosses = classify(s, g, Mode::Closed) == Side::Crosses ||
                     sign_at(s.line, g, s.x_lo) * sign_at(s.line, g, s.x_hi) <= 0;
      CHECK(crosses == w.contains(dualize_line(g), Mode::Closed));
    }
  }
  CHECK_THROWS_AS(dualize_segment(Segment::full({1, 0})), Error);
}

TEST_CASE("rotation is deterministic and small") {
  std::vector<Point> a{{0, 0}, {1, 0}, {2, 0}};
  auto b = a;
  double t1 = rotate_for_general_position(a, 9);
  double t2 = rotate_for_general_position(b, 9);
  CHECK(t1 == t2);
  CHECK(std::abs(t1) >= 0.005);
  CHECK(std::abs(t1) <= 0.02);
  CHECK(a == b);
  CHECK(a[0].x != a[1].x);
}
