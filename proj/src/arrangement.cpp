#include "esample/arrangement.hpp"

#include <algorithm>
#include <tuple>

namespace esample {

CellKind CellKind::parse(const std::string& name) {
  if (name == "poly4") return polygon(4);
  if (name == "poly8") return polygon(8);
  if (name == "trapezoid") return trapezoid();
  throw Error(ErrorCode::InvalidArgument, "unknown cell kind '" + name + "'");
}

std::string CellKind::name() const {
  if (shape == CellShape::Trapezoid) return "trapezoid";
  return "poly" + std::to_string(max_sides);
}

ArrangementTree::ArrangementTree(CellKind kind, ConvexRegion root, Tolerance tol)
    : kind_(kind), tol_(tol) {
  if (kind_.shape == CellShape::Polygon && kind_.max_sides < 3) {
    throw Error(ErrorCode::InvalidArgument, "max_sides must be at least 3");
  }
  Node n;
  n.region = std::move(root);
  nodes_.push_back(std::move(n));
}

int ArrangementTree::add_node(Node n) {
  nodes_.push_back(std::move(n));
  return static_cast<int>(nodes_.size()) - 1;
}

void ArrangementTree::add_crossing(Node& n, int line) {
  const auto& wl = lines_[static_cast<std::size_t>(line)];
  auto seg = n.region.clip_line(wl.line, tol_);
  if (!seg) return;
  n.crossing.push_back({line, seg->x_lo, seg->x_hi});
  n.crossing_weight += wl.weight;
}

int ArrangementTree::add_lines(std::span<const WeightedLine> lines) {
  int first = static_cast<int>(lines_.size());
  for (const auto& wl : lines) {
    if (!(wl.weight > 0.0)) throw Error(ErrorCode::NonPositiveWeight, "line weight must be positive");
    int id = static_cast<int>(lines_.size());
    lines_.push_back(wl);
    for (int leaf : zone(wl.line)) add_crossing(nodes_[static_cast<std::size_t>(leaf)], id);
  }
  return first;
}

void ArrangementTree::remove_crossing(int leaf, int line) {
  auto& n = nodes_[static_cast<std::size_t>(leaf)];
  auto it = std::find_if(n.crossing.begin(), n.crossing.end(),
                         [&](const CrossingSegment& c) { return c.line == line; });
  if (it == n.crossing.end()) return;
  n.crossing_weight -= lines_[static_cast<std::size_t>(line)].weight;
  n.crossing.erase(it);
  if (n.crossing.empty()) n.crossing_weight = 0.0;
}

void ArrangementTree::distribute(int parent, int lo, int hi) {
  auto& p = nodes_[static_cast<std::size_t>(parent)];
  auto& a = nodes_[static_cast<std::size_t>(lo)];
  auto& b = nodes_[static_cast<std::size_t>(hi)];
  for (const auto& tp : p.points) {
    bool up = p.type == NodeType::LineSplit ? above_closed(tp.p, p.split, tol_)
                                            : tp.p.x >= p.x_split;
    (up ? b : a).points.push_back(tp);
  }
  a.count = a.points.size();
  b.count = b.points.size();
  for (const auto& c : p.crossing) {
    const Line& l = lines_[static_cast<std::size_t>(c.line)].line;
    if (p.type == NodeType::LineSplit &&
        (c.line == p.split_source || approx_eq(l, p.split, tol_))) {
      continue;
    }
    for (Node* child : {&a, &b}) {
      if (child->region.classify(l, tol_) == Side::Crosses) add_crossing(*child, c.line);
    }
  }
  p.points.clear();
  p.points.shrink_to_fit();
  p.crossing.clear();
  p.crossing.shrink_to_fit();
  p.crossing_weight = 0.0;
}

std::pair<int, int> ArrangementTree::split_by_line(int leaf, const Line& l, int source) {
  const auto& region = nodes_[static_cast<std::size_t>(leaf)].region;
  auto below = region.clip(l, false, source, tol_);
  auto above = region.clip(l, true, source, tol_);
  if (!below || !above) throw Error(ErrorCode::NoCrossing, "line does not split the cell");
  Node lo, hi;
  lo.region = std::move(*below);
  hi.region = std::move(*above);
  lo.parent = hi.parent = leaf;
  int a = add_node(std::move(lo));
  int b = add_node(std::move(hi));
  auto& p = nodes_[static_cast<std::size_t>(leaf)];
  p.type = NodeType::LineSplit;
  p.split = l;
  p.split_source = source;
  p.lo = a;
  p.hi = b;
  distribute(leaf, a, b);
  return {a, b};
}

std::pair<int, int> ArrangementTree::split_by_x(int leaf, double x) {
  const auto& region = nodes_[static_cast<std::size_t>(leaf)].region;
  auto left = region.clip_x(-kInf, x, tol_);
  auto right = region.clip_x(x, kInf, tol_);
  if (!left || !right) return {-1, -1};
  Node lo, hi;
  lo.region = std::move(*left);
  hi.region = std::move(*right);
  lo.parent = hi.parent = leaf;
  int a = add_node(std::move(lo));
  int b = add_node(std::move(hi));
  auto& p = nodes_[static_cast<std::size_t>(leaf)];
  p.type = NodeType::XSplit;
  p.x_split = x;
  p.lo = a;
  p.hi = b;
  distribute(leaf, a, b);
  return {a, b};
}

void ArrangementTree::repair_polygon(int leaf, std::vector<int>& out) {
  const ConvexRegion region = nodes_[static_cast<std::size_t>(leaf)].region;
  std::size_t sides = region.side_count(tol_);
  if (sides <= static_cast<std::size_t>(kind_.max_sides)) {
    out.push_back(leaf);
    return;
  }
  // Brute force over vertex pairs for the chord with the most even split.
  auto verts = region.vertices(tol_);
  std::optional<Line> best;
  std::size_t best_score = sides;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    for (std::size_t j = i + 1; j < verts.size(); ++j) {
      if (approx_eq(verts[i].x, verts[j].x, tol_)) continue;
      Line chord = line_through(verts[i], verts[j], tol_);
      if (std::abs(chord.a) > 1e7) continue;
      if (region.classify(chord, tol_) != Side::Crosses) continue;
      auto a = region.clip(chord, true, -1, tol_);
      auto b = region.clip(chord, false, -1, tol_);
      if (!a || !b) continue;
      std::size_t score = std::max(a->side_count(tol_), b->side_count(tol_));
      if (score < best_score) {
        best_score = score;
        best = chord;
      }
    }
  }
  if (!best) {
    out.push_back(leaf);
    return;
  }
  auto [lo, hi] = split_by_line(leaf, *best, -1);
  repair_polygon(lo, out);
  repair_polygon(hi, out);
}

std::vector<int> ArrangementTree::split_leaf(int leaf, const Line& l, int source) {
  const auto& n = nodes_[static_cast<std::size_t>(leaf)];
  if (n.type != NodeType::Leaf) throw Error(ErrorCode::InvalidArgument, "node is not a leaf");
  if (n.region.classify(l, tol_) != Side::Crosses) {
    throw Error(ErrorCode::NoCrossing, "line misses the cell interior");
  }
  std::vector<int> out;
  if (kind_.shape == CellShape::Polygon) {
    auto [lo, hi] = split_by_line(leaf, l, source);
    repair_polygon(lo, out);
    repair_polygon(hi, out);
    return out;
  }
  // Trapezoid: walls where l meets the top or bottom, then split the slabs l crosses.
  std::vector<double> xs;
  const auto& region = n.region;
  for (const auto* chain : {&region.top(), &region.bottom()}) {
    for (const auto& piece : *chain) {
      auto x = intersect_x(piece.line, l, tol_);
      if (!x || !(*x > piece.x_lo && *x < piece.x_hi)) continue;
      if (compare(*x, region.x_lo(), tol_) > 0 && compare(*x, region.x_hi(), tol_) < 0) {
        xs.push_back(*x);
      }
    }
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end(),
                       [&](double u, double v) { return approx_eq(u, v, tol_); }),
           xs.end());
  std::vector<int> slabs{leaf};
  for (double x : xs) {
    auto [left, right] = split_by_x(slabs.back(), x);
    if (left < 0) continue;
    slabs.back() = left;
    slabs.push_back(right);
  }
  for (int slab : slabs) {
    if (nodes_[static_cast<std::size_t>(slab)].region.classify(l, tol_) == Side::Crosses) {
      try {
        auto [lo, hi] = split_by_line(slab, l, source);
        out.push_back(lo);
        out.push_back(hi);
        continue;
      } catch (const Error&) {
      }
    }
    out.push_back(slab);
  }
  return out;
}

std::vector<int> ArrangementTree::zone(const Line& l) const {
  std::vector<int> out;
  std::vector<std::tuple<int, double, double>> stack{{0, -kInf, kInf}};
  auto usable = [&](double a, double b) {
    return a < b && !(std::isfinite(a) && std::isfinite(b) && approx_eq(a, b, tol_));
  };
  while (!stack.empty()) {
    auto [i, x0, x1] = stack.back();
    stack.pop_back();
    const auto& n = nodes_[static_cast<std::size_t>(i)];
    switch (n.type) {
      case NodeType::Leaf:
        if (n.region.classify(l, tol_) == Side::Crosses) out.push_back(i);
        break;
      case NodeType::XSplit:
        if (x1 <= n.x_split) {
          stack.emplace_back(n.lo, x0, x1);
        } else if (x0 >= n.x_split) {
          stack.emplace_back(n.hi, x0, x1);
        } else {
          stack.emplace_back(n.hi, n.x_split, x1);
          stack.emplace_back(n.lo, x0, n.x_split);
        }
        break;
      case NodeType::LineSplit: {
        int s0 = sign_at(l, n.split, x0, tol_);
        int s1 = sign_at(l, n.split, x1, tol_);
        if (s0 == 0 && s1 == 0) break;  // runs along the splitter
        if (s0 >= 0 && s1 >= 0) {
          stack.emplace_back(n.hi, x0, x1);
        } else if (s0 <= 0 && s1 <= 0) {
          stack.emplace_back(n.lo, x0, x1);
        } else {
          auto x = intersect_x(l, n.split, tol_);
          double xm = x ? std::clamp(*x, x0, x1) : 0.5 * (x0 + x1);
          int first = s0 > 0 ? n.hi : n.lo;
          int second = s0 > 0 ? n.lo : n.hi;
          if (usable(xm, x1)) stack.emplace_back(second, xm, x1);
          if (usable(x0, xm)) stack.emplace_back(first, x0, xm);
        }
        break;
      }
    }
  }
  return out;
}

int ArrangementTree::locate(const Point& p) const {
  int i = 0;
  while (nodes_[static_cast<std::size_t>(i)].type != NodeType::Leaf) {
    const auto& n = nodes_[static_cast<std::size_t>(i)];
    bool up = n.type == NodeType::LineSplit ? above_closed(p, n.split, tol_) : p.x >= n.x_split;
    i = up ? n.hi : n.lo;
  }
  return i;
}

void ArrangementTree::insert(const TreePoint& tp) {
  int i = 0;
  while (true) {
    auto& n = nodes_[static_cast<std::size_t>(i)];
    ++n.count;
    if (n.type == NodeType::Leaf) {
      n.points.push_back(tp);
      return;
    }
    bool up = n.type == NodeType::LineSplit ? above_closed(tp.p, n.split, tol_)
                                            : tp.p.x >= n.x_split;
    i = up ? n.hi : n.lo;
  }
}

void ArrangementTree::insert_points(std::span<const Point> pts, std::size_t first_id) {
  for (std::size_t k = 0; k < pts.size(); ++k) insert({pts[k], first_id + k});
}

bool ArrangementTree::remove_point(const Point& p, std::size_t id) {
  int leaf = locate(p);
  auto& pts = nodes_[static_cast<std::size_t>(leaf)].points;
  auto it = std::find_if(pts.begin(), pts.end(), [&](const TreePoint& tp) { return tp.id == id; });
  if (it == pts.end()) return false;
  pts.erase(it);
  for (int i = leaf; i >= 0; i = nodes_[static_cast<std::size_t>(i)].parent) {
    --nodes_[static_cast<std::size_t>(i)].count;
  }
  return true;
}

template <typename F, typename G>
void ArrangementTree::walk_between(int node, const Line& l1, const Line& l2, Mode mode,
                                   F&& on_point, G&& on_subtree) const {
  const auto& n = nodes_[static_cast<std::size_t>(node)];
  if (n.count == 0) return;
  auto side = [&](const Line& l) {
    if (n.region.strictly_above(l, tol_)) return 1;
    if (n.region.strictly_below(l, tol_)) return -1;
    return 0;
  };
  int s1 = side(l1);
  int s2 = s1 == 0 ? 0 : side(l2);
  if (s1 != 0 && s2 != 0) {
    if (s1 != s2) on_subtree(node);
    return;
  }
  if (n.type == NodeType::Leaf) {
    for (const auto& tp : n.points) {
      if (between(tp.p, l1, l2, mode, tol_)) on_point(tp);
    }
    return;
  }
  walk_between(n.lo, l1, l2, mode, on_point, on_subtree);
  walk_between(n.hi, l1, l2, mode, on_point, on_subtree);
}

std::size_t ArrangementTree::count_between(const Line& l1, const Line& l2, Mode mode) const {
  std::size_t total = 0;
  walk_between(
      0, l1, l2, mode, [&](const TreePoint&) { ++total; },
      [&](int i) { total += nodes_[static_cast<std::size_t>(i)].count; });
  return total;
}

std::size_t ArrangementTree::count_in_wedge(const DoubleWedge& w, Mode mode) const {
  return count_between(w.upper, w.lower, mode);
}

void ArrangementTree::collect_between(const Line& l1, const Line& l2, Mode mode,
                                      std::vector<std::size_t>& out) const {
  walk_between(
      0, l1, l2, mode, [&](const TreePoint& tp) { out.push_back(tp.id); },
      [&](int root) {
        std::vector<int> stack{root};
        while (!stack.empty()) {
          const auto& n = nodes_[static_cast<std::size_t>(stack.back())];
          stack.pop_back();
          if (n.type == NodeType::Leaf) {
            for (const auto& tp : n.points) out.push_back(tp.id);
          } else {
            stack.push_back(n.lo);
            stack.push_back(n.hi);
          }
        }
      });
}

std::vector<int> ArrangementTree::leaves() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].type == NodeType::Leaf) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<std::vector<Point>> ArrangementTree::leaf_outlines(const Box& viewport) const {
  std::vector<std::vector<Point>> out;
  for (int leaf : leaves()) {
    auto poly = nodes_[static_cast<std::size_t>(leaf)].region.outline(viewport, tol_);
    if (!poly.empty()) out.push_back(std::move(poly));
  }
  return out;
}

}  // namespace esample
