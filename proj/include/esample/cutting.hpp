#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "esample/arrangement.hpp"

namespace esample {

/// Order of indices under the weighted-reservoir keys u^(1/w), descending.
/// Throws NonPositiveWeight.
std::vector<std::size_t> weighted_permutation(std::span<const double> weights, std::uint64_t seed);

struct CuttingOptions {
  CuttingOptions(CellKind k = {}) : kind(k) {}

  CellKind kind;
  /// Pick the crossing line that maximizes the smaller side's crossing
  /// weight instead of the earliest one in the permutation. Slow.
  bool max_min_split = false;
  Tolerance tol;
};

struct CuttingMetrics {
  std::size_t n_lines = 0;
  double r = 0.0;
  std::string kind;
  std::size_t leaves = 0;
  double leaves_per_r2 = 0.0;
  double max_crossing_weight = 0.0;
  double seconds = 0.0;
};

struct Cutting {
  ArrangementTree tree;
  double r = 0.0;
  double total_weight = 0.0;
  double threshold = 0.0;
  double seconds = 0.0;

  CuttingMetrics metrics() const;
};

/// Heavy-cell construction: leaves crossed by more than total/r weight are
/// split one at a time until none remain. `root` restricts the cutting to a
/// region; lines missing it carry no weight there but still count in total.
/// Throws InvalidR when r <= 1.
Cutting create_cutting(std::span<const WeightedLine> lines, double r, const CuttingOptions& opts,
                       std::uint64_t seed, const ConvexRegion& root = ConvexRegion::plane());

/// Brute-force maximum crossing weight over the leaves (testing aid).
double brute_max_crossing(const Cutting& c);

}  // namespace esample
