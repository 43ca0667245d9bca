#include "esample/region.hpp"

#include <algorithm>

namespace esample {

namespace {

using Chain = std::vector<ChainPiece>;

double chain_at(const Chain& c, double x) {
  for (const auto& p : c) {
    if (x <= p.x_hi) return p(x);
  }
  return c.back()(x);
}

const ChainPiece& piece_at(const Chain& c, double x) {
  for (const auto& p : c) {
    if (x <= p.x_hi) return p;
  }
  return c.back();
}

struct Interval {
  double lo = kInf;
  double hi = -kInf;
  bool empty() const { return !(lo <= hi); }
};

// x in [lo, hi] with sign * (chain(x) - l(x)) >= 0. The chain is concave for
// sign = +1 and convex for sign = -1, so the set is an interval.
Interval chain_vs_line(const Chain& c, const Line& l, int sign, double lo, double hi,
                       const Tolerance& tol) {
  if (c.empty()) return {lo, hi};
  Interval out;
  for (const auto& p : c) {
    double plo = std::max(p.x_lo, lo);
    double phi = std::min(p.x_hi, hi);
    if (plo > phi) continue;
    double a = plo, b = phi;
    int s_lo = sign * sign_at(p.line, l, plo, tol);
    int s_hi = sign * sign_at(p.line, l, phi, tol);
    if (s_lo < 0 && s_hi < 0) continue;
    if (s_lo < 0 || s_hi < 0) {
      double x0 = (l.b - p.line.b) / (p.line.a - l.a);
      if (s_lo < 0) a = std::clamp(x0, plo, phi);
      else b = std::clamp(x0, plo, phi);
    }
    out.lo = std::min(out.lo, a);
    out.hi = std::max(out.hi, b);
  }
  return out;
}

Chain restrict_chain(const Chain& c, double lo, double hi) {
  Chain out;
  for (auto p : c) {
    double a = std::max(p.x_lo, lo), b = std::min(p.x_hi, hi);
    if (a < b) {
      p.x_lo = a;
      p.x_hi = b;
      out.push_back(p);
    }
  }
  return out;
}

double representative(double a, double b) {
  bool fa = std::isfinite(a), fb = std::isfinite(b);
  if (fa && fb) return 0.5 * (a + b);
  if (fa) return a + 1.0 + std::abs(a);
  if (fb) return b - 1.0 - std::abs(b);
  return 0.0;
}

void normalize(Chain& c, double lo, double hi, const Tolerance& tol) {
  if (c.size() > 1) {
    Chain kept;
    for (const auto& p : c) {
      bool tiny = std::isfinite(p.x_lo) && std::isfinite(p.x_hi) && approx_eq(p.x_lo, p.x_hi, tol);
      if (!tiny) kept.push_back(p);
    }
    if (kept.empty()) kept.push_back(c.front());
    c = std::move(kept);
  }
  if (c.empty()) return;
  c.front().x_lo = lo;
  for (std::size_t i = 1; i < c.size(); ++i) c[i].x_lo = c[i - 1].x_hi;
  c.back().x_hi = hi;
  Chain merged;
  for (const auto& p : c) {
    if (!merged.empty() && merged.back().line == p.line && merged.back().source == p.source) {
      merged.back().x_hi = p.x_hi;
    } else {
      merged.push_back(p);
    }
  }
  c = std::move(merged);
}

// Pointwise max (keep_larger) or min of a chain and a line over [lo, hi].
Chain envelope(const Chain& c, const Line& l, bool keep_larger, int source, double lo, double hi,
               const Tolerance& tol) {
  if (c.empty()) return {ChainPiece{l, lo, hi, source}};
  Chain out;
  for (const auto& p : restrict_chain(c, lo, hi)) {
    std::vector<double> cuts{p.x_lo};
    if (!approx_eq(p.line.a, l.a, tol)) {
      double x0 = (l.b - p.line.b) / (p.line.a - l.a);
      if (x0 > p.x_lo && x0 < p.x_hi) cuts.push_back(x0);
    }
    cuts.push_back(p.x_hi);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      double a = cuts[i], b = cuts[i + 1];
      double x = representative(a, b);
      double diff = p(x) - l(x);
      if (approx_eq(p.line.a, l.a, tol)) diff = p.line.b - l.b;
      bool piece_wins = keep_larger ? diff >= 0 : diff <= 0;
      if (piece_wins) out.push_back({p.line, a, b, p.source});
      else out.push_back({l, a, b, source});
    }
  }
  normalize(out, lo, hi, tol);
  return out;
}

int gap_sign(const Chain& top, const Chain& bottom, double x, const Tolerance& tol) {
  const auto& t = piece_at(top, x);
  const auto& b = piece_at(bottom, x);
  return sign_at(t.line, b.line, x, tol);
}

}  // namespace

ConvexRegion ConvexRegion::plane() { return ConvexRegion(); }

ConvexRegion ConvexRegion::box(const Box& b) {
  return trapezoid(b.x_lo, b.x_hi, Line{0.0, b.y_hi}, Line{0.0, b.y_lo});
}

ConvexRegion ConvexRegion::trapezoid(double x_lo, double x_hi, std::optional<Line> top,
                                     std::optional<Line> bottom) {
  if (!(x_lo < x_hi)) throw Error(ErrorCode::InvalidArgument, "empty x-range");
  ConvexRegion r;
  r.x_lo_ = x_lo;
  r.x_hi_ = x_hi;
  if (top) r.top_.push_back({*top, x_lo, x_hi, -1});
  if (bottom) r.bottom_.push_back({*bottom, x_lo, x_hi, -1});
  return r;
}

double ConvexRegion::top_at(double x) const { return top_.empty() ? kInf : chain_at(top_, x); }

double ConvexRegion::bottom_at(double x) const {
  return bottom_.empty() ? -kInf : chain_at(bottom_, x);
}

bool ConvexRegion::bounded() const {
  return std::isfinite(x_lo_) && std::isfinite(x_hi_) && !top_.empty() && !bottom_.empty();
}

bool ConvexRegion::has_area(const Tolerance& tol) const {
  if (!(x_lo_ < x_hi_) || (std::isfinite(x_lo_) && std::isfinite(x_hi_) &&
                           approx_eq(x_lo_, x_hi_, tol))) {
    return false;
  }
  if (top_.empty() || bottom_.empty()) return true;
  std::vector<double> xs;
  for (const auto* c : {&top_, &bottom_}) {
    for (const auto& p : *c) {
      if (std::isfinite(p.x_lo)) xs.push_back(p.x_lo);
      if (std::isfinite(p.x_hi)) xs.push_back(p.x_hi);
    }
  }
  if (xs.empty()) xs.push_back(0.0);
  for (double x : xs) {
    if (gap_sign(top_, bottom_, x, tol) > 0) return true;
  }
  if (!std::isfinite(x_hi_) && gap_sign(top_, bottom_, kInf, tol) > 0) return true;
  if (!std::isfinite(x_lo_) && gap_sign(top_, bottom_, -kInf, tol) > 0) return true;
  return false;
}

std::optional<ConvexRegion> ConvexRegion::clip(const Line& l, bool keep_above, int source,
                                               const Tolerance& tol) const {
  // Feasible x-range: where top >= l (keep above) or bottom <= l (keep below).
  Interval iv = keep_above ? chain_vs_line(top_, l, +1, x_lo_, x_hi_, tol)
                           : chain_vs_line(bottom_, l, -1, x_lo_, x_hi_, tol);
  if (iv.empty()) return std::nullopt;
  ConvexRegion r;
  r.x_lo_ = iv.lo;
  r.x_hi_ = iv.hi;
  if (!(r.x_lo_ < r.x_hi_)) return std::nullopt;
  if (keep_above) {
    r.top_ = restrict_chain(top_, r.x_lo_, r.x_hi_);
    normalize(r.top_, r.x_lo_, r.x_hi_, tol);
    r.bottom_ = envelope(bottom_, l, true, source, r.x_lo_, r.x_hi_, tol);
  } else {
    r.bottom_ = restrict_chain(bottom_, r.x_lo_, r.x_hi_);
    normalize(r.bottom_, r.x_lo_, r.x_hi_, tol);
    r.top_ = envelope(top_, l, false, source, r.x_lo_, r.x_hi_, tol);
  }
  if (!r.has_area(tol)) return std::nullopt;
  return r;
}

std::optional<ConvexRegion> ConvexRegion::clip_x(double lo, double hi, const Tolerance& tol) const {
  ConvexRegion r;
  r.x_lo_ = std::max(lo, x_lo_);
  r.x_hi_ = std::min(hi, x_hi_);
  if (!(r.x_lo_ < r.x_hi_)) return std::nullopt;
  r.top_ = restrict_chain(top_, r.x_lo_, r.x_hi_);
  r.bottom_ = restrict_chain(bottom_, r.x_lo_, r.x_hi_);
  normalize(r.top_, r.x_lo_, r.x_hi_, tol);
  normalize(r.bottom_, r.x_lo_, r.x_hi_, tol);
  if (!r.has_area(tol)) return std::nullopt;
  return r;
}

std::optional<ConvexRegion> ConvexRegion::intersect(const ConvexRegion& other,
                                                    const Tolerance& tol) const {
  auto r = clip_x(other.x_lo_, other.x_hi_, tol);
  // A concave chain is the minimum of its piece lines, a convex one the maximum.
  for (const auto& p : other.top_) {
    if (!r) return r;
    r = r->clip(p.line, false, p.source, tol);
  }
  for (const auto& p : other.bottom_) {
    if (!r) return r;
    r = r->clip(p.line, true, p.source, tol);
  }
  return r;
}

std::pair<int, int> ConvexRegion::extreme_signs(const Line& l, const Tolerance& tol) const {
  int mn = 1, mx = -1;
  if (bottom_.empty()) {
    mn = -1;
  } else {
    for (const auto& p : bottom_) {
      mn = std::min({mn, sign_at(p.line, l, p.x_lo, tol), sign_at(p.line, l, p.x_hi, tol)});
      if (mn < 0) break;
    }
  }
  if (top_.empty()) {
    mx = 1;
  } else {
    for (const auto& p : top_) {
      mx = std::max({mx, sign_at(p.line, l, p.x_lo, tol), sign_at(p.line, l, p.x_hi, tol)});
      if (mx > 0) break;
    }
  }
  return {mn, mx};
}

Side ConvexRegion::classify(const Line& l, const Tolerance& tol) const {
  auto [mn, mx] = extreme_signs(l, tol);
  if (mn >= 0) return Side::Above;
  if (mx <= 0) return Side::Below;
  return Side::Crosses;
}

bool ConvexRegion::strictly_above(const Line& l, const Tolerance& tol) const {
  return extreme_signs(l, tol).first > 0;
}

bool ConvexRegion::strictly_below(const Line& l, const Tolerance& tol) const {
  return extreme_signs(l, tol).second < 0;
}

bool ConvexRegion::contains(const Point& p, const Tolerance& tol) const {
  if (compare(p.x, x_lo_, tol) < 0 || compare(p.x, x_hi_, tol) > 0) return false;
  double x = std::clamp(p.x, x_lo_, x_hi_);
  if (!bottom_.empty() && side_of({x, p.y}, piece_at(bottom_, x).line, tol) < 0) return false;
  if (!top_.empty() && side_of({x, p.y}, piece_at(top_, x).line, tol) > 0) return false;
  return true;
}

std::optional<Segment> ConvexRegion::clip_line(const Line& l, const Tolerance& tol) const {
  Interval a = chain_vs_line(top_, l, +1, x_lo_, x_hi_, tol);
  Interval b = chain_vs_line(bottom_, l, -1, x_lo_, x_hi_, tol);
  double lo = std::max(a.lo, b.lo), hi = std::min(a.hi, b.hi);
  if (a.empty() || b.empty() || !(lo < hi)) return std::nullopt;
  if (std::isfinite(lo) && std::isfinite(hi) && approx_eq(lo, hi, tol)) return std::nullopt;
  return Segment{l, lo, hi};
}

std::vector<Point> ConvexRegion::vertices(const Tolerance& tol) const {
  std::vector<Point> raw;
  auto push = [&](const ChainPiece& p, double x) {
    if (std::isfinite(x)) raw.push_back({x, p(x)});
  };
  for (const auto& p : bottom_) push(p, p.x_lo);
  if (!bottom_.empty()) push(bottom_.back(), bottom_.back().x_hi);
  for (auto it = top_.rbegin(); it != top_.rend(); ++it) push(*it, it->x_hi);
  if (!top_.empty()) push(top_.front(), top_.front().x_lo);
  std::vector<Point> out;
  for (const auto& p : raw) {
    if (out.empty() || !approx_eq(out.back(), p, tol)) out.push_back(p);
  }
  while (out.size() > 1 && approx_eq(out.front(), out.back(), tol)) out.pop_back();
  return out;
}

std::vector<std::pair<Point, Point>> ConvexRegion::edges(const Tolerance& tol) const {
  std::vector<std::pair<Point, Point>> out;
  if (!bounded()) return out;
  auto v = vertices(tol);
  for (std::size_t i = 0; i < v.size(); ++i) out.emplace_back(v[i], v[(i + 1) % v.size()]);
  return out;
}

std::size_t ConvexRegion::side_count(const Tolerance& tol) const {
  std::size_t n = top_.size() + bottom_.size();
  auto wall = [&](double x) {
    if (!std::isfinite(x)) return false;
    if (top_.empty() || bottom_.empty()) return true;
    return gap_sign(top_, bottom_, x, tol) > 0;
  };
  if (wall(x_lo_)) ++n;
  if (wall(x_hi_)) ++n;
  return n;
}

std::vector<Point> ConvexRegion::outline(const Box& viewport, const Tolerance& tol) const {
  auto r = intersect(box(viewport), tol);
  if (!r) return {};
  return r->vertices(tol);
}

void ConvexRegion::source_vertices(std::vector<std::pair<int, int>>& out,
                                   const Tolerance& tol) const {
  auto add = [&](int s, int t) {
    if (s >= 0 && t >= 0 && s != t) out.emplace_back(std::min(s, t), std::max(s, t));
  };
  for (const auto* c : {&top_, &bottom_}) {
    for (std::size_t i = 1; i < c->size(); ++i) {
      if (std::isfinite((*c)[i].x_lo)) add((*c)[i - 1].source, (*c)[i].source);
    }
  }
  if (top_.empty() || bottom_.empty()) return;
  if (std::isfinite(x_lo_) && gap_sign(top_, bottom_, x_lo_, tol) <= 0) {
    add(top_.front().source, bottom_.front().source);
  }
  if (std::isfinite(x_hi_) && gap_sign(top_, bottom_, x_hi_, tol) <= 0) {
    add(top_.back().source, bottom_.back().source);
  }
}

double ConvexRegion::area(const Tolerance& tol) const {
  if (!bounded()) return kInf;
  auto v = vertices(tol);
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& p = v[i];
    const auto& q = v[(i + 1) % v.size()];
    s += p.x * q.y - q.x * p.y;
  }
  return 0.5 * std::abs(s);
}

}  // namespace esample
