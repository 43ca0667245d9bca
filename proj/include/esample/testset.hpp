#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "esample/arrangement.hpp"

namespace esample {

enum class TestSetMethod { Lines, Points, Dual };

TestSetMethod parse_test_set_method(const std::string& name);
std::string to_string(TestSetMethod m);

/// Multipliers on the nominal sizes; logarithms are natural.
struct TestSetConstants {
  double c_lines = 1.0;
  double c_points = 1.0;
  double c_dual = 1.0;
};

struct TestSet {
  std::vector<WeightedLine> lines;
  TestSetMethod method = TestSetMethod::Lines;
  double r = 0.0;
  /// Dual method only: the coarse cutting of the sampled points' dual lines,
  /// holding the dual point of every test line (id = index into `lines`).
  std::shared_ptr<const ArrangementTree> dual_tree;
  /// Dual method only: finite cutting vertices found (0 when the all-pairs
  /// fallback was used).
  std::size_t dual_vertices = 0;

  void reset_weights();
  /// Ids of test lines that cross the interior of a bounded region, found
  /// through open double-wedge queries on the dual tree.
  std::vector<std::size_t> crossing_ids(const ConvexRegion& region) const;
};

std::size_t test_set_lines_size(std::size_t n, double r, double c = 1.0);
std::size_t test_set_points_sample(std::size_t n, double r, double c = 1.0);
std::size_t test_set_dual_sample(std::size_t n, double r, double c = 1.0);

/// All three throw TooFewPoints when |X| < 2.
TestSet test_set_lines(std::span<const Point> pts, double r, std::uint64_t seed,
                       const TestSetConstants& c = {});
TestSet test_set_points(std::span<const Point> pts, double r, std::uint64_t seed,
                        const TestSetConstants& c = {});
TestSet test_set_dual(std::span<const Point> pts, double r, std::uint64_t seed,
                      const TestSetConstants& c = {});

TestSet build_test_set(TestSetMethod method, std::span<const Point> pts, double r,
                       std::uint64_t seed, const TestSetConstants& c = {});

}  // namespace esample
