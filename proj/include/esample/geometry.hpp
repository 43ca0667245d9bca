#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "esample/error.hpp"

namespace esample {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

namespace detail {
inline double default_rel_tol = 1e-9;
inline double default_abs_tol = 1e-12;
}  // namespace detail

/// Comparison slack used by every predicate in the library.
struct Tolerance {
  double rel_tol = detail::default_rel_tol;
  double abs_tol = detail::default_abs_tol;

  /// Throws InvalidArgument unless both values are strictly positive.
  void validate() const;
};

/// Changes what a default-constructed Tolerance holds. Meant to be called
/// once at startup, before any geometry runs.
void set_default_tolerance(const Tolerance& tol);

/// |u - v| <= max(rel_tol * max(|u|, |v|), abs_tol).
bool approx_eq(double u, double v, const Tolerance& tol = {});

/// Sign of u - v, with values inside tolerance mapped to 0.
int compare(double u, double v, const Tolerance& tol = {});

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

bool approx_eq(const Point& p, const Point& q, const Tolerance& tol = {});

/// Non-vertical line y = a*x + b.
struct Line {
  double a = 0.0;
  double b = 0.0;

  double operator()(double x) const { return a * x + b; }

  friend bool operator==(const Line&, const Line&) = default;
};

bool approx_eq(const Line& l, const Line& m, const Tolerance& tol = {});

/// A line restricted to the x-interval [x_lo, x_hi]; either end may be
/// infinite.
struct Segment {
  Line line;
  double x_lo = -kInf;
  double x_hi = kInf;

  static Segment full(const Line& l) { return {l, -kInf, kInf}; }

  bool bounded() const { return std::isfinite(x_lo) && std::isfinite(x_hi); }
  Point lo_point() const { return {x_lo, line(x_lo)}; }
  Point hi_point() const { return {x_hi, line(x_hi)}; }
  double width() const { return x_hi - x_lo; }
};

enum class Mode { Open, Closed };
enum class Side { Above, Below, Crosses };

/// Sign of s(x) - l(x) within tolerance; an infinite x uses the slopes.
int sign_at(const Line& s, const Line& l, double x, const Tolerance& tol = {});

/// +1 when p is above l, -1 below, 0 on it (within tolerance).
int side_of(const Point& p, const Line& l, const Tolerance& tol = {});

/// Closed-above tie rule shared by point location, insertion and splits.
inline bool above_closed(const Point& p, const Line& l, const Tolerance& tol = {}) {
  return side_of(p, l, tol) >= 0;
}

/// Line through two points. Throws DegenerateLine when the points coincide
/// or share an x-coordinate within tolerance.
Line line_through(const Point& p, const Point& q, const Tolerance& tol = {});

/// Position of a segment relative to a line. In closed mode a segment that
/// touches l only at an endpoint keeps its side; in open mode it crosses.
/// A segment lying on l is Above in closed mode and Crosses in open mode.
Side classify(const Segment& s, const Line& l, Mode mode, const Tolerance& tol = {});

/// Meeting point of the supporting lines when it lies inside both closed
/// x-intervals; nothing for (near-)parallel lines.
std::optional<Point> segment_intersection(const Segment& s, const Segment& t,
                                          const Tolerance& tol = {});

/// x-coordinate where two lines meet, or nothing when their slopes agree
/// within tolerance.
std::optional<double> intersect_x(const Line& l, const Line& m, const Tolerance& tol = {});

// Duality: point (a, b) <-> line y = a*x - b. Above/below order is preserved:
// p lies above l iff the dual point of l lies above the dual line of p.
Line dualize_point(const Point& p);
Point dualize_line(const Line& l);

/// Dual image of a bounded segment: the points whose dual lines meet it.
/// Those are exactly the points lying vertically between `upper` and
/// `lower`, the duals of the right and left endpoints.
struct DoubleWedge {
  Point apex;
  Line upper;
  Line lower;

  bool contains(const Point& p, Mode mode = Mode::Closed, const Tolerance& tol = {}) const;
};

/// Throws DegenerateLine for a segment with an infinite endpoint.
DoubleWedge dualize_segment(const Segment& s);

/// Membership in the closed (or open) region vertically between two lines.
/// This is the wedge predicate without an apex, so it also covers the strip
/// that a vertical segment dualizes to.
bool between(const Point& p, const Line& l1, const Line& l2, Mode mode,
             const Tolerance& tol = {});

/// Rotates every point about the centroid by `angle` radians.
void rotate_points(std::span<Point> pts, double angle);

/// Applies the seeded small rotation that puts ingested data in general
/// position (no shared x-coordinates, no vertical spanning lines). Returns the
/// angle used so it can be recorded with a run.
double rotate_for_general_position(std::span<Point> pts, std::uint64_t seed);

struct Box {
  double x_lo, x_hi, y_lo, y_hi;
};

/// Bounding box of the points, padded by a small fraction of its extent.
Box padded_bounds(std::span<const Point> pts, double pad_fraction = 1e-3);

}  // namespace esample
