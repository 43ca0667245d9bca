#include "esample/hamtree.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

#include "esample/random.hpp"

namespace esample {

double cut_imbalance(std::span<const Point> pts, const Line& l, const Tolerance& tol) {
  if (pts.empty()) return 0.0;
  std::size_t above = 0, below = 0;
  for (const auto& p : pts) {
    int s = side_of(p, l, tol);
    above += s > 0;
    below += s < 0;
  }
  double worst = 2.0 * static_cast<double>(std::max(above, below)) / static_cast<double>(pts.size()) - 1.0;
  return std::max(0.0, worst);
}

HamCut approx_ham_sandwich(std::span<const Point> a, std::span<const Point> b, int t,
                           std::uint64_t seed) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::TooFewPoints, "ham-sandwich cut needs two nonempty sets");
  if (t < 2) throw Error(ErrorCode::InvalidArgument, "ham-sandwich t must be >= 2");
  Rng rng(seed);
  const std::size_t total = a.size() + b.size();
  auto at = [&](std::size_t i) -> const Point& { return i < a.size() ? a[i] : b[i - a.size()]; };
  auto sample = sample_indices(total, std::min<std::size_t>(static_cast<std::size_t>(t), total), rng);

  HamCut best;
  bool found = false;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    for (std::size_t j = i + 1; j < sample.size(); ++j) {
      const Point& p = at(sample[i]);
      const Point& q = at(sample[j]);
      if (approx_eq(p.x, q.x)) continue;
      Line l = line_through(p, q);
      double imb = std::max(cut_imbalance(a, l), cut_imbalance(b, l));
      if (!found || imb < best.imbalance) {
        best = {l, imb};
        found = true;
      }
    }
  }
  if (!found) {
    // Every sampled pair is vertical: fall back to a horizontal median.
    std::vector<double> ys;
    for (std::size_t i = 0; i < total; ++i) ys.push_back(at(i).y);
    std::nth_element(ys.begin(), ys.begin() + static_cast<std::ptrdiff_t>(ys.size() / 2), ys.end());
    Line l{0.0, ys[ys.size() / 2]};
    best = {l, std::max(cut_imbalance(a, l), cut_imbalance(b, l))};
  }
  return best;
}

namespace {

struct Halves {
  std::vector<std::size_t> above;
  std::vector<std::size_t> below;
};

// Points on the line go to whichever side is currently smaller.
Halves split_balanced(std::span<const Point> pts, const std::vector<std::size_t>& idx, const Line& l) {
  Halves h;
  std::vector<std::size_t> on;
  for (std::size_t i : idx) {
    int s = side_of(pts[i], l);
    if (s > 0) h.above.push_back(i);
    else if (s < 0) h.below.push_back(i);
    else on.push_back(i);
  }
  for (std::size_t i : on) (h.above.size() <= h.below.size() ? h.above : h.below).push_back(i);
  std::sort(h.above.begin(), h.above.end());
  std::sort(h.below.begin(), h.below.end());
  return h;
}

ConvexRegion clipped(const ConvexRegion& r, const Line& l, bool above) {
  auto c = r.clip(l, above);
  return c ? *c : r;
}

struct Piece {
  ConvexRegion region;
  std::vector<std::size_t> idx;
};

class HamBuilder {
 public:
  HamBuilder(std::span<const Point> pts, std::size_t leaf, int t, std::uint64_t seed, Partition& part)
      : pts_(pts), leaf_(leaf), t_(t), rng_(seed), part_(part) {}

  void quad(Piece p, std::size_t depth) {
    part_.stats.levels = std::max(part_.stats.levels, depth + 1);
    if (finish(p)) return;
    std::vector<std::size_t> right;
    std::vector<std::size_t> left = std::move(p.idx);
    Line v = quantile_cut(pts_, left, (left.size() + 1) / 2, kSteepSlope, right);
    Piece l{clipped(p.region, v, true), std::move(left)};
    Piece r{clipped(p.region, v, false), std::move(right)};
    auto sides = cut_pair(l, r);
    for (auto& child : sides) quad(std::move(child), depth + 1);
  }

  void pair(Piece a, Piece b, std::size_t depth) {
    part_.stats.levels = std::max(part_.stats.levels, depth + 1);
    bool a_done = finish(a);
    bool b_done = finish(b);
    if (a_done && b_done) return;
    if (a_done || b_done) {
      // A lone set is paired with itself, which makes the cut a bisector.
      Piece& s = a_done ? b : a;
      Piece copy = s;
      auto sides = cut_pair(s, copy);
      pair(std::move(sides[0]), std::move(sides[1]), depth + 1);
      return;
    }
    auto sides = cut_pair(a, b);
    pair(std::move(sides[0]), std::move(sides[1]), depth + 1);
    pair(std::move(sides[2]), std::move(sides[3]), depth + 1);
  }

 private:
  // Emits the piece when it needs at most three cells.
  bool finish(Piece& p) {
    std::size_t m = p.idx.size();
    if (m == 0) return true;
    if (m <= leaf_) {
      part_.cells.push_back({std::move(p.region), std::move(p.idx)});
      return true;
    }
    std::size_t c = (m + leaf_ - 1) / leaf_;
    if (c <= 3) {
      quota_split(pts_, p.region, std::move(p.idx), c, true, part_.cells);
      return true;
    }
    return false;
  }

  // Cuts both pieces with one approximate ham-sandwich line. Returns
  // {a above, a below, b above, b below}; when a == b (same indices) only
  // the first two are meaningful.
  std::vector<Piece> cut_pair(const Piece& a, const Piece& b) {
    std::vector<Point> pa, pb;
    for (std::size_t i : a.idx) pa.push_back(pts_[i]);
    for (std::size_t i : b.idx) pb.push_back(pts_[i]);
    HamCut h = approx_ham_sandwich(pa, pb, t_, rng_.next());
    std::vector<Piece> out;
    for (const Piece* p : {&a, &b}) {
      if (h.imbalance < 1.0) {
        Halves s = split_balanced(pts_, p->idx, h.line);
        if (!s.above.empty() && !s.below.empty()) {
          out.push_back({clipped(p->region, h.line, true), std::move(s.above)});
          out.push_back({clipped(p->region, h.line, false), std::move(s.below)});
          continue;
        }
      }
      // No progress from the sampled candidates: horizontal median instead.
      std::vector<std::size_t> top = p->idx, bottom;
      Line m = quantile_cut(pts_, top, (top.size() + 1) / 2, 0.0, bottom);
      out.push_back({clipped(p->region, m, true), std::move(top)});
      out.push_back({clipped(p->region, m, false), std::move(bottom)});
    }
    return out;
  }

  std::span<const Point> pts_;
  std::size_t leaf_;
  int t_;
  Rng rng_;
  Partition& part_;
};

Partition build(std::span<const Point> pts, std::size_t leaf_size, int t, std::uint64_t seed,
                bool twin) {
  if (leaf_size < 1) throw Error(ErrorCode::InvalidArgument, "leaf_size must be >= 1");
  if (t < 2) throw Error(ErrorCode::InvalidArgument, "ham-sandwich t must be >= 2");
  auto start = std::chrono::steady_clock::now();
  Partition part;
  part.method = twin ? "double_ham" : "ham";
  part.t = std::max<std::size_t>(1, (pts.size() + leaf_size - 1) / leaf_size);
  if (!pts.empty()) {
    std::vector<std::size_t> all(pts.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    Piece root{ConvexRegion::box(padded_bounds(pts)), std::move(all)};
    HamBuilder builder(pts, leaf_size, t, seed, part);
    if (!twin || root.idx.size() <= leaf_size) {
      builder.quad(std::move(root), 0);
    } else {
      std::vector<std::size_t> right;
      std::vector<std::size_t> left = std::move(root.idx);
      Line v = quantile_cut(pts, left, (left.size() + 1) / 2, kSteepSlope, right);
      builder.pair({clipped(root.region, v, true), std::move(left)},
                   {clipped(root.region, v, false), std::move(right)}, 0);
    }
  }
  part.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return part;
}

}  // namespace

Partition ham_tree(std::span<const Point> pts, std::size_t leaf_size, int t, std::uint64_t seed) {
  return build(pts, leaf_size, t, seed, false);
}

Partition double_ham_tree(std::span<const Point> pts, std::size_t leaf_size, int t,
                          std::uint64_t seed) {
  return build(pts, leaf_size, t, seed, true);
}

}  // namespace esample
