#include "esample/partition.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "esample/cutting.hpp"
#include "esample/random.hpp"

namespace esample {

std::size_t Partition::point_count() const {
  std::size_t n = 0;
  for (const auto& c : cells) n += c.points.size();
  return n;
}

std::size_t Partition::max_cell_size() const {
  std::size_t m = 0;
  for (const auto& c : cells) m = std::max(m, c.points.size());
  return m;
}

Line quantile_cut(std::span<const Point> pts, std::vector<std::size_t>& idx, std::size_t keep,
                  double a, std::vector<std::size_t>& rest) {
  keep = std::min(keep, idx.size());
  auto key = [&](std::size_t i) { return pts[i].y - a * pts[i].x; };
  // Key descending, input index ascending: a strict order, so ties are
  // broken the same way every run.
  auto before = [&](std::size_t u, std::size_t v) {
    double ku = key(u), kv = key(v);
    return ku > kv || (ku == kv && u < v);
  };
  double c;
  if (keep == 0) {
    double hi = -kInf;
    for (std::size_t i : idx) hi = std::max(hi, key(i));
    c = idx.empty() ? 0.0 : hi + 1.0;
  } else if (keep == idx.size()) {
    double lo = kInf;
    for (std::size_t i : idx) lo = std::min(lo, key(i));
    c = lo - 1.0;
  } else {
    std::nth_element(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(keep), idx.end(), before);
    double below = key(idx[keep]);
    double above = kInf;
    for (std::size_t k = 0; k < keep; ++k) above = std::min(above, key(idx[k]));
    c = 0.5 * (above + below);
  }
  rest.assign(idx.begin() + static_cast<std::ptrdiff_t>(keep), idx.end());
  idx.resize(keep);
  std::sort(idx.begin(), idx.end());
  std::sort(rest.begin(), rest.end());
  return {a, c};
}

void quota_split(std::span<const Point> pts, const ConvexRegion& region,
                 std::vector<std::size_t> idx, std::size_t pieces, bool steep_first,
                 std::vector<PartitionCell>& out) {
  if (idx.empty()) return;
  if (pieces <= 1 || idx.size() == 1) {
    out.push_back({region, std::move(idx)});
    return;
  }
  pieces = std::min(pieces, idx.size());
  std::size_t hi_pieces = (pieces + 1) / 2;
  std::size_t keep = idx.size() * hi_pieces / pieces;
  std::vector<std::size_t> rest;
  Line cut = quantile_cut(pts, idx, keep, steep_first ? kSteepSlope : 0.0, rest);
  auto up = region.clip(cut, true);
  auto down = region.clip(cut, false);
  quota_split(pts, up ? *up : region, std::move(idx), hi_pieces, !steep_first, out);
  quota_split(pts, down ? *down : region, std::move(rest), pieces - hi_pieces, !steep_first, out);
}

namespace {

void validate_t(std::size_t n, std::size_t t) {
  if (t < 2 || t > n) throw Error(ErrorCode::InvalidT, "t must satisfy 2 <= t <= |X|");
}

std::vector<Point> gather(std::span<const Point> pts, const std::vector<std::size_t>& idx) {
  std::vector<Point> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(pts[i]);
  return out;
}

constexpr std::size_t kMaxCandidates = 12;

class MatBuilder {
 public:
  MatBuilder(std::span<const Point> pts, std::size_t cap, const MatParams& params,
             std::uint64_t seed, Partition& part)
      : pts_(pts), cap_(cap), params_(params), rng_(seed), part_(part) {}

  void refine(const ConvexRegion& region, std::vector<std::size_t> idx, std::size_t depth) {
    part_.stats.levels = std::max(part_.stats.levels, depth + 1);
    std::size_t m = idx.size();
    if (m <= cap_) {
      if (m > 0) part_.cells.push_back({hull_region(pts_, idx, region), std::move(idx)});
      return;
    }
    std::size_t bb = std::min<std::size_t>(static_cast<std::size_t>(params_.b), (m + cap_ - 1) / cap_);
    if (bb < 4) {
      quota_split(pts_, region, std::move(idx), bb, true, part_.cells);
      return;
    }
    std::size_t quota = m / bb;
    std::vector<PartitionCell> children;
    std::vector<std::size_t> remaining = std::move(idx);
    TestSet last;
    for (std::size_t rj = bb; rj >= 4 && remaining.size() > quota; rj /= 2) {
      auto sub = gather(pts_, remaining);
      TestSet h = build_test_set(params_.test_set, sub, static_cast<double>(rj), rng_.next(),
                                 params_.constants);
      std::vector<std::size_t> crossings(h.lines.size(), 0);
      std::size_t start = remaining.size();
      while (remaining.size() > start / 2 && remaining.size() > quota) {
        children.push_back(emit_cell(region, remaining, h, std::sqrt(static_cast<double>(rj)), quota));
        for (std::size_t id : h.crossing_ids(children.back().region)) {
          h.lines[id].weight *= 2.0;
          ++crossings[id];
        }
      }
      for (std::size_t c : crossings) part_.stats.max_test_crossing = std::max(part_.stats.max_test_crossing, c);
      last = std::move(h);
    }
    // Leftovers are scattered between emitted cells; keep emitting shrunk
    // copies of the whole region, then close with the hull of the rest.
    while (remaining.size() > quota) children.push_back(emit_cell(region, remaining, last, 0.0, quota));
    if (!remaining.empty()) {
      ConvexRegion hull = hull_region(pts_, remaining, region);
      children.push_back({std::move(hull), std::move(remaining)});
    }
    for (auto& child : children) {
      refine(hull_region(pts_, child.points, child.region), std::move(child.points), depth + 1);
    }
  }

 private:
  // Emits one cell of exactly `quota` remaining points and removes them.
  // Candidates are cutting-hierarchy nodes (each a convex cell) holding
  // between quota and 2*quota points, shrunk by a halfplane cut of one of a
  // few slopes from either side; the candidate crossed by the least test-set
  // weight wins.
  PartitionCell emit_cell(const ConvexRegion& region, std::vector<std::size_t>& remaining,
                          const TestSet& h, double r, std::size_t quota) {
    std::vector<std::pair<ConvexRegion, std::vector<std::size_t>>> nodes;
    if (r > 1.0) {
      auto cut = create_cutting(h.lines, r, CuttingOptions(params_.kind), rng_.next(), region);
      for (std::size_t k = 0; k < remaining.size(); ++k) cut.tree.insert({pts_[remaining[k]], k});
      int smallest = 0;
      std::vector<int> picked;
      for (int i = 0; i < static_cast<int>(cut.tree.node_count()); ++i) {
        std::size_t c = cut.tree.node(i).count;
        if (c < quota) continue;
        if (c < cut.tree.node(smallest).count) smallest = i;
        if (c <= 4 * quota) picked.push_back(i);
      }
      if (picked.empty()) picked.push_back(smallest);
      std::stable_sort(picked.begin(), picked.end(), [&](int u, int v) {
        return cut.tree.node(u).count < cut.tree.node(v).count;
      });
      if (picked.size() > kMaxCandidates) picked.resize(kMaxCandidates);
      for (int i : picked) {
        std::vector<std::size_t> members;
        std::vector<int> stack{i};
        while (!stack.empty()) {
          const auto& nd = cut.tree.node(stack.back());
          stack.pop_back();
          if (nd.type == ArrangementTree::NodeType::Leaf) {
            for (const auto& tp : nd.points) members.push_back(remaining[tp.id]);
          } else {
            stack.push_back(nd.hi);
            stack.push_back(nd.lo);
          }
        }
        std::sort(members.begin(), members.end());
        nodes.emplace_back(cut.tree.node(i).region, std::move(members));
      }
    } else {
      nodes.emplace_back(region, remaining);
    }

    static constexpr double kSlopes[] = {kSteepSlope, -kSteepSlope, 0.0, 1.0, -1.0, 0.4, -0.4, 2.5, -2.5};
    ConvexRegion best_region = region;
    std::vector<std::size_t> best_pts;
    double best_score = kInf, best_area = kInf;
    for (const auto& [node_region, members] : nodes) {
      // A shrunk cell lies inside its node, so only lines crossing the node
      // can cross it.
      auto candidates = h.crossing_ids(node_region);
      for (double a : kSlopes) {
        for (bool keep_above : {true, false}) {
          std::vector<std::size_t> kept = members, rest;
          std::size_t keep = keep_above ? quota : members.size() - quota;
          Line l = quantile_cut(pts_, kept, keep, a, rest);
          if (!keep_above) kept.swap(rest);
          ConvexRegion cell = node_region;
          if (auto c = node_region.clip(l, keep_above)) cell = std::move(*c);
          double score = 0.0;
          for (std::size_t id : candidates) {
            if (cell.classify(h.lines[id].line) == Side::Crosses) score += h.lines[id].weight;
          }
          double area = cell.area();
          if (score < best_score || (score == best_score && area < best_area)) {
            best_score = score;
            best_area = area;
            best_region = std::move(cell);
            best_pts = std::move(kept);
          }
        }
      }
    }
    std::vector<std::size_t> left;
    left.reserve(remaining.size() - best_pts.size());
    std::set_difference(remaining.begin(), remaining.end(), best_pts.begin(), best_pts.end(),
                        std::back_inserter(left));
    remaining = std::move(left);
    return {best_region, best_pts};
  }

  std::span<const Point> pts_;
  std::size_t cap_;
  MatParams params_;
  Rng rng_;
  Partition& part_;
};

}  // namespace

Partition partition_mat(std::span<const Point> pts, std::size_t t, const MatParams& params,
                        std::uint64_t seed) {
  validate_t(pts.size(), t);
  if (params.b < 4) throw Error(ErrorCode::InvalidArgument, "mat branching b must be >= 4");
  auto start = std::chrono::steady_clock::now();
  Partition part;
  part.t = t;
  part.method = "mat";
  std::vector<std::size_t> all(pts.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  std::size_t cap = std::max<std::size_t>(1, pts.size() / t);
  MatBuilder builder(pts, cap, params, seed, part);
  builder.refine(ConvexRegion::box(padded_bounds(pts)), std::move(all), 0);
  part.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return part;
}

Partition partition_chan(std::span<const Point> pts, std::size_t t, const ChanParams& params,
                         std::uint64_t seed) {
  validate_t(pts.size(), t);
  if (params.b < 2) throw Error(ErrorCode::InvalidArgument, "Chan branching b must be >= 2");
  auto start = std::chrono::steady_clock::now();
  Rng rng(seed);
  Partition part;
  part.t = t;
  part.method = params.simple ? "chan_simple" : "chan";
  const std::size_t n = pts.size();
  const std::size_t cap = std::max<std::size_t>(1, n / t);
  const double b = params.b;

  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  std::vector<PartitionCell> cells{{ConvexRegion::box(padded_bounds(pts)), std::move(all)}};
  TestSet h = test_set_dual(pts, static_cast<double>(t), rng.next(), params.constants);

  auto active = [&] {
    return std::any_of(cells.begin(), cells.end(),
                       [&](const PartitionCell& c) { return c.points.size() > cap; });
  };
  while (active()) {
    ++part.stats.levels;
    h.reset_weights();
    std::vector<std::size_t> crossings(h.lines.size(), 0);
    double count = static_cast<double>(cells.size());
    double q = params.q > 0 ? params.q
                            : std::min(1.0, std::sqrt(b * count) / static_cast<double>(h.lines.size()));
    double p = params.p > 0 ? params.p : std::min(1.0, std::sqrt(b / count) * std::log(double(n)));
    if (params.simple) p = q = 1.0;
    const double grow = 1.0 + 1.0 / b;

    std::vector<PartitionCell> next;
    for (auto& cell : cells) {
      std::size_t m = cell.points.size();
      if (m <= cap) {
        next.push_back(std::move(cell));
        continue;
      }
      std::size_t bb = std::min<std::size_t>(static_cast<std::size_t>(params.b), (m + cap - 1) / cap);
      double limit = static_cast<double>(m) / static_cast<double>(bb);
      auto pieces_for = [&](std::size_t c) {
        return static_cast<std::size_t>(std::ceil(static_cast<double>(c) / limit - 1e-9));
      };

      std::vector<WeightedLine> sample;
      double total = 0.0;
      for (const auto& wl : h.lines) total += wl.weight;
      for (const auto& wl : h.lines) {
        double prob = std::min(1.0, q * static_cast<double>(h.lines.size()) * wl.weight / total);
        if (prob >= 1.0 || rng.uniform() < prob) sample.push_back({wl.line, wl.weight / prob});
      }

      std::vector<PartitionCell> pieces;
      if (bb >= 8 && !sample.empty()) {
        double ri = std::max(2.0, std::floor(std::sqrt(double(bb) / (4.0 * params.cutting_constant))));
        auto cut = create_cutting(sample, ri, CuttingOptions(params.kind), rng.next(), cell.region);
        for (std::size_t i : cell.points) cut.tree.insert({pts[i], i});
        for (int leaf : cut.tree.leaves()) {
          const auto& node = cut.tree.node(leaf);
          if (node.points.empty()) continue;
          std::vector<std::size_t> idx;
          for (const auto& tp : node.points) idx.push_back(tp.id);
          std::sort(idx.begin(), idx.end());
          quota_split(pts, node.region, std::move(idx), pieces_for(node.points.size()), true, pieces);
        }
      } else {
        quota_split(pts, cell.region, std::move(cell.points), bb, true, pieces);
      }

      for (const auto& piece : pieces) {
        if (!params.simple && !(rng.uniform() < p)) continue;
        for (std::size_t id : h.crossing_ids(piece.region)) {
          h.lines[id].weight *= grow;
          ++crossings[id];
        }
      }
      for (auto& piece : pieces) next.push_back(std::move(piece));
    }
    cells = std::move(next);
    for (std::size_t c : crossings) part.stats.max_test_crossing = std::max(part.stats.max_test_crossing, c);
  }
  part.cells = std::move(cells);
  part.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return part;
}

ConvexRegion hull_region(std::span<const Point> pts, const std::vector<std::size_t>& idx,
                         const ConvexRegion& region) {
  if (idx.size() < 3) return region;
  std::vector<Point> p;
  for (std::size_t i : idx) p.push_back(pts[i]);
  std::sort(p.begin(), p.end(), [](const Point& u, const Point& v) {
    return u.x < v.x || (u.x == v.x && u.y < v.y);
  });
  auto cross = [](const Point& o, const Point& a, const Point& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
  };
  std::vector<Point> lower, upper;
  for (const auto& q : p) {
    while (lower.size() >= 2 && cross(lower[lower.size() - 2], lower.back(), q) <= 0) lower.pop_back();
    lower.push_back(q);
    while (upper.size() >= 2 && cross(upper[upper.size() - 2], upper.back(), q) >= 0) upper.pop_back();
    upper.push_back(q);
  }
  auto out = region.clip_x(p.front().x, p.back().x);
  if (!out) return region;
  ConvexRegion r = *out;
  auto edge = [&](const Point& a, const Point& b, bool keep_above) {
    if (b.x - a.x <= 1e-12 * std::max(1.0, std::abs(a.x))) return;
    if (auto c = r.clip(line_through(a, b), keep_above)) r = std::move(*c);
  };
  for (std::size_t i = 0; i + 1 < lower.size(); ++i) edge(lower[i], lower[i + 1], true);
  for (std::size_t i = 0; i + 1 < upper.size(); ++i) edge(upper[i], upper[i + 1], false);
  return r;
}

CrossingProfile crossing_profile(const Partition& part, std::span<const Line> probes) {
  CrossingProfile prof;
  prof.histogram.assign(part.cells.size() + 1, 0);
  double sum = 0.0;
  for (const auto& l : probes) {
    std::size_t c = 0;
    for (const auto& cell : part.cells) c += cell.region.classify(l) == Side::Crosses;
    prof.max = std::max(prof.max, c);
    sum += static_cast<double>(c);
    ++prof.histogram[c];
  }
  if (!probes.empty()) prof.mean = sum / static_cast<double>(probes.size());
  while (prof.histogram.size() > 1 && prof.histogram.back() == 0) prof.histogram.pop_back();
  return prof;
}

void check_partition(const Partition& part, std::size_t n, std::size_t max_size) {
  std::vector<char> seen(n, 0);
  std::size_t total = 0;
  for (const auto& cell : part.cells) {
    if (cell.points.empty()) throw Error(ErrorCode::InvariantViolation, "empty partition cell");
    if (cell.points.size() > max_size) {
      throw Error(ErrorCode::InvariantViolation,
                  "cell holds " + std::to_string(cell.points.size()) + " points, bound " +
                      std::to_string(max_size));
    }
    for (std::size_t i : cell.points) {
      if (i >= n || seen[i]) throw Error(ErrorCode::InvariantViolation, "cells overlap or index out of range");
      seen[i] = 1;
      ++total;
    }
  }
  if (total != n) throw Error(ErrorCode::InvariantViolation, "cells do not cover every point");
}

}  // namespace esample
