#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "esample/region.hpp"

namespace esample {

enum class CellShape { Polygon, Trapezoid };

struct CellKind {
  CellShape shape = CellShape::Polygon;
  int max_sides = 8;

  static CellKind polygon(int max_sides = 8) { return {CellShape::Polygon, max_sides}; }
  static CellKind trapezoid() { return {CellShape::Trapezoid, 4}; }

  /// "poly4", "poly8", "trapezoid"; throws InvalidArgument otherwise.
  static CellKind parse(const std::string& name);
  std::string name() const;
};

struct WeightedLine {
  Line line;
  double weight = 1.0;
};

struct TreePoint {
  Point p;
  std::size_t id = 0;
};

/// A registered line clipped to the leaf it crosses.
struct CrossingSegment {
  int line = -1;
  double x_lo = -kInf;
  double x_hi = kInf;
};

/// Binary space decomposition whose internal nodes split by a line (points
/// on the line go above) or by an x-threshold (points at the threshold go
/// right), and whose leaves carry resident points and crossing segments.
class ArrangementTree {
 public:
  enum class NodeType { Leaf, LineSplit, XSplit };

  struct Node {
    NodeType type = NodeType::Leaf;
    ConvexRegion region = ConvexRegion::plane();
    Line split;
    double x_split = 0.0;
    int split_source = -1;
    // Line splits: hi = above, lo = below. X splits: hi = right, lo = left.
    int hi = -1;
    int lo = -1;
    int parent = -1;
    std::size_t count = 0;
    std::vector<TreePoint> points;
    std::vector<CrossingSegment> crossing;
    double crossing_weight = 0.0;
  };

  explicit ArrangementTree(CellKind kind = {}, ConvexRegion root = ConvexRegion::plane(),
                           Tolerance tol = {});

  const CellKind& kind() const { return kind_; }
  const Tolerance& tolerance() const { return tol_; }
  const Node& node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
  std::size_t node_count() const { return nodes_.size(); }
  const std::vector<WeightedLine>& lines() const { return lines_; }
  std::size_t total_points() const { return nodes_.front().count; }

  /// Registers lines and records them in every leaf whose interior they
  /// cross. Returns the id of the first added line.
  int add_lines(std::span<const WeightedLine> lines);

  /// Splits a leaf by l. Throws NoCrossing when l misses the leaf interior.
  /// Returns the new leaves.
  std::vector<int> split_leaf(int leaf, const Line& l, int source = -1);

  /// Drops one crossing record from a leaf (used when a split is refused).
  void remove_crossing(int leaf, int line);

  /// Leaves whose interior l meets.
  std::vector<int> zone(const Line& l) const;
  int locate(const Point& p) const;

  void insert(const TreePoint& tp);
  /// Inserts points with ids first_id, first_id + 1, ...
  void insert_points(std::span<const Point> pts, std::size_t first_id = 0);
  bool remove_point(const Point& p, std::size_t id);

  /// Stored points inside the double wedge (closed boundaries by default).
  std::size_t count_in_wedge(const DoubleWedge& w, Mode mode = Mode::Closed) const;
  /// Stored points vertically between two lines.
  std::size_t count_between(const Line& l1, const Line& l2, Mode mode) const;
  void collect_between(const Line& l1, const Line& l2, Mode mode,
                       std::vector<std::size_t>& out) const;

  std::vector<int> leaves() const;
  std::vector<std::vector<Point>> leaf_outlines(const Box& viewport) const;

 private:
  int add_node(Node n);
  // Splits without side-count repair; returns {below, above}.
  std::pair<int, int> split_by_line(int leaf, const Line& l, int source);
  std::pair<int, int> split_by_x(int leaf, double x);
  void repair_polygon(int leaf, std::vector<int>& out);
  void distribute(int parent, int a, int b);
  void add_crossing(Node& n, int line);
  template <typename F, typename G>
  void walk_between(int node, const Line& l1, const Line& l2, Mode mode, F&& on_point,
                    G&& on_subtree) const;

  CellKind kind_;
  Tolerance tol_;
  std::vector<Node> nodes_;
  std::vector<WeightedLine> lines_;
};

}  // namespace esample
