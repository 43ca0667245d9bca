#include "esample/testset.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "esample/cutting.hpp"
#include "esample/random.hpp"

namespace esample {

TestSetMethod parse_test_set_method(const std::string& name) {
  if (name == "lines") return TestSetMethod::Lines;
  if (name == "points") return TestSetMethod::Points;
  if (name == "dual") return TestSetMethod::Dual;
  throw Error(ErrorCode::InvalidArgument, "unknown test set method '" + name + "'");
}

std::string to_string(TestSetMethod m) {
  switch (m) {
    case TestSetMethod::Lines: return "lines";
    case TestSetMethod::Points: return "points";
    case TestSetMethod::Dual: return "dual";
  }
  return "unknown";
}

void TestSet::reset_weights() {
  for (auto& wl : lines) wl.weight = 1.0;
}

std::vector<std::size_t> TestSet::crossing_ids(const ConvexRegion& region) const {
  std::vector<std::size_t> ids;
  if (!dual_tree || !region.bounded()) {
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (region.classify(lines[i].line) == Side::Crosses) ids.push_back(i);
    }
    return ids;
  }
  for (const auto& [u, v] : region.edges()) {
    dual_tree->collect_between(dualize_point(u), dualize_point(v), Mode::Open, ids);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

std::size_t test_set_lines_size(std::size_t n, double r, double c) {
  double ln = std::log(static_cast<double>(n));
  return static_cast<std::size_t>(std::max(1.0, std::ceil(c * r * ln * ln)));
}

namespace {

std::size_t clamp_sample(double s, std::size_t n) {
  double v = std::ceil(s);
  if (!(v >= 2.0)) v = 2.0;
  return std::min(static_cast<std::size_t>(std::min(v, 1e15)), n);
}

void require_points(std::span<const Point> pts) {
  if (pts.size() < 2) throw Error(ErrorCode::TooFewPoints, "a test set needs at least 2 points");
}

std::vector<WeightedLine> all_pairs(const std::vector<Point>& s) {
  std::vector<WeightedLine> out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      if (approx_eq(s[i].x, s[j].x)) continue;
      out.push_back({line_through(s[i], s[j]), 1.0});
    }
  }
  return out;
}

std::vector<Point> sample_points(std::span<const Point> pts, std::size_t s, Rng& rng) {
  std::vector<Point> out;
  for (std::size_t i : sample_indices(pts.size(), s, rng)) out.push_back(pts[i]);
  return out;
}

}  // namespace

std::size_t test_set_points_sample(std::size_t n, double r, double c) {
  return clamp_sample(c * std::sqrt(r) * std::log(static_cast<double>(n)), n);
}

std::size_t test_set_dual_sample(std::size_t n, double r, double c) {
  return clamp_sample(c * std::sqrt(r) * std::log(r), n);
}

TestSet test_set_lines(std::span<const Point> pts, double r, std::uint64_t seed,
                       const TestSetConstants& c) {
  require_points(pts);
  Rng rng(seed);
  TestSet ts;
  ts.method = TestSetMethod::Lines;
  ts.r = r;
  std::size_t want = test_set_lines_size(pts.size(), r, c.c_lines);
  std::size_t attempts = 0;
  while (ts.lines.size() < want) {
    if (++attempts > 100 * want + 1000) {
      throw Error(ErrorCode::TooFewPoints, "no non-vertical pair of distinct points found");
    }
    std::size_t i = rng.below(pts.size());
    std::size_t j = rng.below(pts.size() - 1);
    if (j >= i) ++j;
    if (approx_eq(pts[i].x, pts[j].x)) continue;  // resample near-vertical pairs
    ts.lines.push_back({line_through(pts[i], pts[j]), 1.0});
  }
  return ts;
}

TestSet test_set_points(std::span<const Point> pts, double r, std::uint64_t seed,
                        const TestSetConstants& c) {
  require_points(pts);
  Rng rng(seed);
  TestSet ts;
  ts.method = TestSetMethod::Points;
  ts.r = r;
  ts.lines = all_pairs(sample_points(pts, test_set_points_sample(pts.size(), r, c.c_points), rng));
  return ts;
}

TestSet test_set_dual(std::span<const Point> pts, double r, std::uint64_t seed,
                      const TestSetConstants& c) {
  require_points(pts);
  Rng rng(seed);
  TestSet ts;
  ts.method = TestSetMethod::Dual;
  ts.r = r;
  auto s = sample_points(pts, test_set_dual_sample(pts.size(), r, c.c_dual), rng);
  std::vector<WeightedLine> duals;
  for (const auto& p : s) duals.push_back({dualize_point(p), 1.0});
  double coarse = std::max(2.0, std::ceil(std::sqrt(r)));
  auto cut = create_cutting(duals, coarse, {CellKind::polygon(8)}, rng.next());

  std::set<std::pair<int, int>> vertices;
  std::vector<std::pair<int, int>> buf;
  for (int leaf : cut.tree.leaves()) {
    buf.clear();
    cut.tree.node(leaf).region.source_vertices(buf);
    vertices.insert(buf.begin(), buf.end());
  }
  for (const auto& [i, j] : vertices) {
    const Point& a = s[static_cast<std::size_t>(i)];
    const Point& b = s[static_cast<std::size_t>(j)];
    if (approx_eq(a.x, b.x)) continue;
    ts.lines.push_back({line_through(a, b), 1.0});
  }
  ts.dual_vertices = ts.lines.size();
  if (ts.lines.empty()) {
    // Too few dual lines for the coarse cutting to have a finite vertex.
    ts.lines = all_pairs(s);
  }
  auto tree = std::make_shared<ArrangementTree>(std::move(cut.tree));
  for (std::size_t i = 0; i < ts.lines.size(); ++i) tree->insert({dualize_line(ts.lines[i].line), i});
  ts.dual_tree = std::move(tree);
  return ts;
}

TestSet build_test_set(TestSetMethod method, std::span<const Point> pts, double r,
                       std::uint64_t seed, const TestSetConstants& c) {
  switch (method) {
    case TestSetMethod::Lines: return test_set_lines(pts, r, seed, c);
    case TestSetMethod::Points: return test_set_points(pts, r, seed, c);
    case TestSetMethod::Dual: return test_set_dual(pts, r, seed, c);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown test set method");
}

}  // namespace esample
