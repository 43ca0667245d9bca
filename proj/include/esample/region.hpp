#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "esample/geometry.hpp"

namespace esample {

/// One linear piece of a region boundary chain. `source` identifies the
/// input line that produced it (-1 for chords, box sides and shrink cuts).
struct ChainPiece {
  Line line;
  double x_lo = -kInf;
  double x_hi = kInf;
  int source = -1;

  double operator()(double x) const { return line(x); }
};

/// Convex planar region without vertical edges except at its x-bounds:
///
///   { (x, y) : x_lo <= x <= x_hi, bottom(x) <= y <= top(x) }
///
/// `top` is a concave chain (empty means +inf), `bottom` a convex chain
/// (empty means -inf), both covering [x_lo, x_hi] contiguously. The x-bounds
/// act as vertical walls where the chains do not meet, which is how
/// trapezoid side walls and bounding boxes are represented.
class ConvexRegion {
 public:
  static ConvexRegion plane();
  static ConvexRegion box(const Box& b);
  /// Trapezoid between optional top/bottom lines over [x_lo, x_hi].
  static ConvexRegion trapezoid(double x_lo, double x_hi, std::optional<Line> top,
                                std::optional<Line> bottom);

  double x_lo() const { return x_lo_; }
  double x_hi() const { return x_hi_; }
  const std::vector<ChainPiece>& top() const { return top_; }
  const std::vector<ChainPiece>& bottom() const { return bottom_; }

  double top_at(double x) const;
  double bottom_at(double x) const;

  bool bounded() const;

  /// Region intersected with the closed halfplane above (or below) l; empty
  /// when the intersection has no area. New boundary pieces carry `source`.
  std::optional<ConvexRegion> clip(const Line& l, bool keep_above, int source = -1,
                                   const Tolerance& tol = {}) const;
  std::optional<ConvexRegion> clip_x(double lo, double hi, const Tolerance& tol = {}) const;
  /// Intersection with another region, constraint by constraint.
  std::optional<ConvexRegion> intersect(const ConvexRegion& other, const Tolerance& tol = {}) const;

  /// Above: region inside the closed halfplane above l. Below: symmetric.
  /// Crosses: l passes through the interior.
  Side classify(const Line& l, const Tolerance& tol = {}) const;
  /// Every point of the region is above l by more than the tolerance.
  bool strictly_above(const Line& l, const Tolerance& tol = {}) const;
  bool strictly_below(const Line& l, const Tolerance& tol = {}) const;

  bool contains(const Point& p, const Tolerance& tol = {}) const;

  /// Portion of l inside the closed region, when it has positive length.
  std::optional<Segment> clip_line(const Line& l, const Tolerance& tol = {}) const;

  /// Finite vertices in counter-clockwise boundary order.
  std::vector<Point> vertices(const Tolerance& tol = {}) const;
  /// Boundary edges between consecutive vertices; bounded regions only.
  std::vector<std::pair<Point, Point>> edges(const Tolerance& tol = {}) const;
  /// Number of boundary pieces, counting walls of positive (or infinite)
  /// height.
  std::size_t side_count(const Tolerance& tol = {}) const;
  /// Polygon of the region clipped to a viewport, counter-clockwise.
  std::vector<Point> outline(const Box& viewport, const Tolerance& tol = {}) const;

  /// Pairs of input-line ids meeting at a finite vertex of this region.
  void source_vertices(std::vector<std::pair<int, int>>& out, const Tolerance& tol = {}) const;

  double area(const Tolerance& tol = {}) const;

 private:
  ConvexRegion() = default;

  // min over the region of sign(bottom - l) and max of sign(top - l).
  std::pair<int, int> extreme_signs(const Line& l, const Tolerance& tol) const;
  bool has_area(const Tolerance& tol) const;

  double x_lo_ = -kInf;
  double x_hi_ = kInf;
  std::vector<ChainPiece> top_;
  std::vector<ChainPiece> bottom_;
};

}  // namespace esample
