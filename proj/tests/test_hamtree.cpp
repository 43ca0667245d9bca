#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "esample/hamtree.hpp"
#include "esample/random.hpp"

using namespace esample;

namespace {

std::vector<Point> uniform(std::size_t n, Rng& rng) {
  std::vector<Point> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({rng.uniform(), rng.uniform()});
  return out;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

// Recount straight from the definition: the best split of on-line points.
double brute_imbalance(const std::vector<Point>& s, const Line& l) {
  double best = 1.0;
  std::size_t above = 0, on = 0;
  for (const auto& p : s) {
    double d = p.y - l(p.x);
    if (std::abs(d) <= 1e-9 * std::max({1.0, std::abs(p.y), std::abs(l.a * p.x)})) ++on;
    else if (d > 0) ++above;
  }
  for (std::size_t k = 0; k <= on; ++k) {
    double frac = double(above + k) / double(s.size());
    best = std::min(best, 2.0 * std::abs(frac - 0.5));
  }
  return best;
}

}  // namespace

TEST_CASE("symmetric four points") {
  std::vector<Point> a{{-1, -1}, {-1.001, 1}}, b{{1, -1}, {1.001, 1}};
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto cut = approx_ham_sandwich(a, b, 4, seed);
    CHECK(cut.imbalance == 0.0);
    CHECK(cut.imbalance <= 0.5);
  }
  auto small = approx_ham_sandwich(a, b, 2, 3);
  CHECK(small.imbalance <= 1.0);
}

TEST_CASE("errors") {
  std::vector<Point> a{{0, 0}}, none;
  CHECK_THROWS_AS(approx_ham_sandwich(a, none, 5, 1), Error);
  CHECK_THROWS_AS(approx_ham_sandwich(a, a, 1, 1), Error);
  CHECK_THROWS_AS(ham_tree(a, 0, 11, 1), Error);
}

TEST_CASE("reported imbalance matches a recount") {
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    auto a = uniform(50, rng), b = uniform(70, rng);
    auto cut = approx_ham_sandwich(a, b, 11, rng.next());
    double brute = std::max(brute_imbalance(a, cut.line), brute_imbalance(b, cut.line));
    CHECK(cut.imbalance == doctest::Approx(brute).epsilon(1e-12));
  }
}

TEST_CASE("imbalance calibration") {
  Rng rng(2);
  std::vector<double> t11, t3, t41;
  for (int trial = 0; trial < 50; ++trial) {
    auto a = uniform(500, rng), b = uniform(500, rng);
    t11.push_back(approx_ham_sandwich(a, b, 11, rng.next()).imbalance);
    t3.push_back(approx_ham_sandwich(a, b, 3, rng.next()).imbalance);
    t41.push_back(approx_ham_sandwich(a, b, 41, rng.next()).imbalance);
  }
  CHECK(median(t11) <= 0.25);
  CHECK(median(t41) <= median(t3));
}

TEST_CASE("ham tree partitions") {
  Rng rng(3);
  auto pts = uniform(4096, rng);
  for (bool twin : {false, true}) {
    auto part = twin ? double_ham_tree(pts, 64, 11, 5) : ham_tree(pts, 64, 11, 5);
    CHECK_NOTHROW(check_partition(part, pts.size(), 64));
    CHECK(part.cells.size() >= 64);
    CHECK(part.cells.size() <= 2 * 64);
    CHECK(part.t == 64);
    for (const auto& c : part.cells) {
      for (std::size_t i : c.points) CHECK(c.region.contains(pts[i], Tolerance{1e-6, 1e-9}));
    }
    auto again = twin ? double_ham_tree(pts, 64, 11, 5) : ham_tree(pts, 64, 11, 5);
    REQUIRE(again.cells.size() == part.cells.size());
    for (std::size_t i = 0; i < part.cells.size(); ++i) CHECK(again.cells[i].points == part.cells[i].points);
  }
}

TEST_CASE("base cases") {
  Rng rng(4);
  auto pts = uniform(30, rng);
  CHECK(ham_tree(pts, 30, 11, 1).cells.size() == 1);
  CHECK(double_ham_tree(pts, 100, 11, 1).cells.size() == 1);
  auto three = ham_tree(pts, 10, 11, 1);
  CHECK(three.cells.size() == 3);
  CHECK_NOTHROW(check_partition(three, 30, 10));
  CHECK(ham_tree(std::vector<Point>{}, 4, 11, 1).cells.empty());
}

TEST_CASE("duplicate points still split") {
  std::vector<Point> pts(200, Point{0.5, 0.5});
  for (int i = 0; i < 100; ++i) pts.push_back({0.1 * (i % 7), 0.3});
  auto part = ham_tree(pts, 16, 11, 2);
  CHECK_NOTHROW(check_partition(part, pts.size(), 16));
  auto twin = double_ham_tree(pts, 16, 11, 2);
  CHECK_NOTHROW(check_partition(twin, pts.size(), 16));
}
