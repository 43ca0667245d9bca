#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "esample/testset.hpp"

namespace esample {

struct PartitionCell {
  ConvexRegion region = ConvexRegion::plane();
  /// Indices into the input point array.
  std::vector<std::size_t> points;
};

struct PartitionStats {
  double seconds = 0.0;
  /// Largest number of cells one test line was seen crossing (0 when the
  /// method keeps no test set).
  std::size_t max_test_crossing = 0;
  std::size_t levels = 0;
};

struct Partition {
  std::vector<PartitionCell> cells;
  std::size_t t = 0;
  std::string method;
  PartitionStats stats;

  std::size_t point_count() const;
  std::size_t max_cell_size() const;
};

struct MatParams {
  int b = 16;
  TestSetMethod test_set = TestSetMethod::Lines;
  TestSetConstants constants;
  CellKind kind = CellKind::polygon(8);
};

struct ChanParams {
  int b = 22;
  /// Rates in (0, 1]; a value <= 0 means "use the default formula".
  double p = 0.0;
  double q = 0.0;
  bool simple = false;
  TestSetConstants constants;
  CellKind kind = CellKind::polygon(8);
  /// Running estimate of leaves / r^2 used to pick the local cutting size.
  double cutting_constant = 7.3;
};

/// Both throw InvalidT unless 2 <= t <= |X|.
Partition partition_mat(std::span<const Point> pts, std::size_t t, const MatParams& params,
                        std::uint64_t seed);
Partition partition_chan(std::span<const Point> pts, std::size_t t, const ChanParams& params,
                         std::uint64_t seed);

struct CrossingProfile {
  std::size_t max = 0;
  double mean = 0.0;
  /// histogram[c] = number of probes crossing exactly c cells.
  std::vector<std::size_t> histogram;
};

CrossingProfile crossing_profile(const Partition& part, std::span<const Line> probes);

/// Throws InvariantViolation unless the cells disjointly cover [0, n) and
/// every cell holds at most `max_size` points.
void check_partition(const Partition& part, std::size_t n, std::size_t max_size);

/// Cuts a point subset (indices into pts) inside `region` into `pieces`
/// parts of near-equal size by recursive median cuts, alternating between
/// steep and horizontal lines. Appends the parts to `out`.
void quota_split(std::span<const Point> pts, const ConvexRegion& region,
                 std::vector<std::size_t> idx, std::size_t pieces, bool steep_first,
                 std::vector<PartitionCell>& out);

/// Splits idx into the `keep` points with the largest key y - a*x and the
/// rest; returns the separating line y = a*x + c (kept points lie above).
Line quantile_cut(std::span<const Point> pts, std::vector<std::size_t>& idx, std::size_t keep,
                  double a, std::vector<std::size_t>& rest);

/// `region` clipped to the convex hull of the indexed points; unchanged when
/// the hull has no area.
ConvexRegion hull_region(std::span<const Point> pts, const std::vector<std::size_t>& idx,
                         const ConvexRegion& region);

inline constexpr double kSteepSlope = 1e6;

}  // namespace esample
