#include "esample/geometry.hpp"

#include <algorithm>
#include <tuple>

#include "esample/random.hpp"

namespace esample {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DegenerateLine: return "DegenerateLine";
    case ErrorCode::NoCrossing: return "NoCrossing";
    case ErrorCode::InvalidR: return "InvalidR";
    case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::InvalidT: return "InvalidT";
    case ErrorCode::InvalidK: return "InvalidK";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::EmptyCell: return "EmptyCell";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::TooManyBadRows: return "TooManyBadRows";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
  }
  return "Unknown";
}

void Tolerance::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "tolerances must be strictly positive");
  }
}

void set_default_tolerance(const Tolerance& tol) {
  tol.validate();
  detail::default_rel_tol = tol.rel_tol;
  detail::default_abs_tol = tol.abs_tol;
}

bool approx_eq(double u, double v, const Tolerance& tol) {
  if (u == v) return true;
  if (!std::isfinite(u) || !std::isfinite(v)) return false;
  double scale = std::max(std::abs(u), std::abs(v));
  return std::abs(u - v) <= std::max(tol.rel_tol * scale, tol.abs_tol);
}

int compare(double u, double v, const Tolerance& tol) {
  if (approx_eq(u, v, tol)) return 0;
  return u < v ? -1 : 1;
}

namespace {

// Compares y against l(x), scaling the relative slack by the size of the
// terms that produced l(x) so that cancellation in a*x + b is tolerated.
int compare_on_line(double y, const Line& l, double x, const Tolerance& tol) {
  double v = l(x);
  double scale = std::max({std::abs(y), std::abs(l.a * x), std::abs(l.b)});
  double diff = y - v;
  if (std::abs(diff) <= std::max(tol.rel_tol * scale, tol.abs_tol)) return 0;
  return diff < 0 ? -1 : 1;
}

// Sign of s(x) - l(x) at one end of a segment; infinite ends use slopes.
int end_sign(const Line& s, const Line& l, double x, const Tolerance& tol) {
  if (std::isfinite(x)) {
    double scale = std::max({std::abs(s.a * x), std::abs(s.b), std::abs(l.a * x), std::abs(l.b)});
    double diff = s(x) - l(x);
    if (std::abs(diff) <= std::max(tol.rel_tol * scale, tol.abs_tol)) return 0;
    return diff < 0 ? -1 : 1;
  }
  if (approx_eq(s.a, l.a, tol)) return compare(s.b, l.b, tol);
  int slope_sign = s.a > l.a ? 1 : -1;
  return x > 0 ? slope_sign : -slope_sign;
}

}  // namespace

int sign_at(const Line& s, const Line& l, double x, const Tolerance& tol) {
  return end_sign(s, l, x, tol);
}

bool approx_eq(const Point& p, const Point& q, const Tolerance& tol) {
  return approx_eq(p.x, q.x, tol) && approx_eq(p.y, q.y, tol);
}

bool approx_eq(const Line& l, const Line& m, const Tolerance& tol) {
  return approx_eq(l.a, m.a, tol) && approx_eq(l.b, m.b, tol);
}

int side_of(const Point& p, const Line& l, const Tolerance& tol) {
  return compare_on_line(p.y, l, p.x, tol);
}

Line line_through(const Point& p, const Point& q, const Tolerance& tol) {
  if (approx_eq(p.x, q.x, tol)) {
    throw Error(ErrorCode::DegenerateLine, "points share an x-coordinate");
  }
  double a = (q.y - p.y) / (q.x - p.x);
  // Anchor the intercept at the point nearer the origin to limit cancellation.
  const Point& anchor = std::abs(p.x) <= std::abs(q.x) ? p : q;
  return {a, anchor.y - a * anchor.x};
}

Side classify(const Segment& s, const Line& l, Mode mode, const Tolerance& tol) {
  int lo = end_sign(s.line, l, s.x_lo, tol);
  int hi = end_sign(s.line, l, s.x_hi, tol);
  if (mode == Mode::Closed) {
    if (lo >= 0 && hi >= 0) return Side::Above;
    if (lo <= 0 && hi <= 0) return Side::Below;
    return Side::Crosses;
  }
  if (lo > 0 && hi > 0) return Side::Above;
  if (lo < 0 && hi < 0) return Side::Below;
  return Side::Crosses;
}

std::optional<double> intersect_x(const Line& l, const Line& m, const Tolerance& tol) {
  if (approx_eq(l.a, m.a, tol)) return std::nullopt;
  return (m.b - l.b) / (l.a - m.a);
}

std::optional<Point> segment_intersection(const Segment& s, const Segment& t,
                                          const Tolerance& tol) {
  // Canonical argument order makes the result bitwise symmetric.
  auto key = [](const Segment& g) { return std::tie(g.line.a, g.line.b, g.x_lo, g.x_hi); };
  const Segment& first = key(s) <= key(t) ? s : t;
  const Segment& second = key(s) <= key(t) ? t : s;
  auto x = intersect_x(first.line, second.line, tol);
  if (!x) return std::nullopt;
  auto inside = [&](const Segment& g) {
    return compare(*x, g.x_lo, tol) >= 0 && compare(*x, g.x_hi, tol) <= 0;
  };
  if (!inside(first) || !inside(second)) return std::nullopt;
  return Point{*x, first.line(*x)};
}

Line dualize_point(const Point& p) { return {p.x, -p.y}; }

Point dualize_line(const Line& l) { return {l.a, -l.b}; }

bool between(const Point& p, const Line& l1, const Line& l2, Mode mode, const Tolerance& tol) {
  int s1 = side_of(p, l1, tol);
  int s2 = side_of(p, l2, tol);
  return mode == Mode::Closed ? s1 * s2 <= 0 : s1 * s2 < 0;
}

bool DoubleWedge::contains(const Point& p, Mode mode, const Tolerance& tol) const {
  return between(p, upper, lower, mode, tol);
}

DoubleWedge dualize_segment(const Segment& s) {
  if (!s.bounded()) {
    throw Error(ErrorCode::DegenerateLine, "cannot dualize a segment with an infinite endpoint");
  }
  return {dualize_line(s.line), dualize_point(s.hi_point()), dualize_point(s.lo_point())};
}

void rotate_points(std::span<Point> pts, double angle) {
  if (pts.empty()) return;
  double cx = 0.0, cy = 0.0;
  for (const auto& p : pts) {
    cx += p.x;
    cy += p.y;
  }
  cx /= static_cast<double>(pts.size());
  cy /= static_cast<double>(pts.size());
  double c = std::cos(angle), s = std::sin(angle);
  for (auto& p : pts) {
    double dx = p.x - cx, dy = p.y - cy;
    p = {cx + c * dx - s * dy, cy + s * dx + c * dy};
  }
}

double rotate_for_general_position(std::span<Point> pts, std::uint64_t seed) {
  Rng rng(seed ^ 0x5eed0f0f5eed0f0fULL);
  double angle = rng.uniform(0.005, 0.02);
  if (rng.bernoulli(0.5)) angle = -angle;
  rotate_points(pts, angle);
  return angle;
}

Box padded_bounds(std::span<const Point> pts, double pad_fraction) {
  if (pts.empty()) return {-1.0, 1.0, -1.0, 1.0};
  Box b{kInf, -kInf, kInf, -kInf};
  for (const auto& p : pts) {
    b.x_lo = std::min(b.x_lo, p.x);
    b.x_hi = std::max(b.x_hi, p.x);
    b.y_lo = std::min(b.y_lo, p.y);
    b.y_hi = std::max(b.y_hi, p.y);
  }
  double extent = std::max({b.x_hi - b.x_lo, b.y_hi - b.y_lo, 1e-9});
  double pad = pad_fraction * extent + 1e-9;
  return {b.x_lo - pad, b.x_hi + pad, b.y_lo - pad, b.y_hi + pad};
}

}  // namespace esample
