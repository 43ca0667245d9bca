#include "esample/cutting.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <numeric>

#include "esample/random.hpp"

namespace esample {

std::vector<std::size_t> weighted_permutation(std::span<const double> weights,
                                              std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> key(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] > 0.0) || !std::isfinite(weights[i])) {
      throw Error(ErrorCode::NonPositiveWeight, "weights must be positive and finite");
    }
    // log(u^(1/w)) preserves the order and avoids underflow for large w.
    key[i] = std::log(rng.uniform_open()) / weights[i];
  }
  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return key[a] > key[b]; });
  return order;
}

CuttingMetrics Cutting::metrics() const {
  CuttingMetrics m;
  m.n_lines = tree.lines().size();
  m.r = r;
  m.kind = tree.kind().name();
  auto leaves = tree.leaves();
  m.leaves = leaves.size();
  m.leaves_per_r2 = static_cast<double>(m.leaves) / (r * r);
  for (int leaf : leaves) m.max_crossing_weight = std::max(m.max_crossing_weight, tree.node(leaf).crossing_weight);
  m.seconds = seconds;
  return m;
}

namespace {

// Smaller of the two crossing weights a split by `line` would leave.
double smaller_side(const ArrangementTree& tree, int leaf, int line, const Tolerance& tol) {
  const auto& n = tree.node(leaf);
  const Line& l = tree.lines()[static_cast<std::size_t>(line)].line;
  auto up = n.region.clip(l, true, -1, tol);
  auto down = n.region.clip(l, false, -1, tol);
  if (!up || !down) return -1.0;
  double wu = 0.0, wd = 0.0;
  for (const auto& c : n.crossing) {
    if (c.line == line) continue;
    const auto& wl = tree.lines()[static_cast<std::size_t>(c.line)];
    if (up->classify(wl.line, tol) == Side::Crosses) wu += wl.weight;
    if (down->classify(wl.line, tol) == Side::Crosses) wd += wl.weight;
  }
  return -std::max(wu, wd);
}

}  // namespace

Cutting create_cutting(std::span<const WeightedLine> lines, double r, const CuttingOptions& opts,
                       std::uint64_t seed, const ConvexRegion& root) {
  if (!(r > 1.0)) throw Error(ErrorCode::InvalidR, "r must exceed 1");
  auto start = std::chrono::steady_clock::now();
  Cutting c{ArrangementTree(opts.kind, root, opts.tol), r, 0.0, 0.0, 0.0};
  std::vector<double> weights;
  weights.reserve(lines.size());
  for (const auto& wl : lines) {
    weights.push_back(wl.weight);
    c.total_weight += wl.weight;
  }
  auto order = weighted_permutation(weights, seed);
  std::vector<std::size_t> rank(lines.size());
  for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = i;
  c.tree.add_lines(lines);
  c.threshold = c.total_weight / r;
  const double limit = c.threshold * (1.0 + 1e-12);

  std::deque<int> work;
  if (c.tree.node(0).crossing_weight > limit) work.push_back(0);
  while (!work.empty()) {
    int leaf = work.front();
    work.pop_front();
    const auto& n = c.tree.node(leaf);
    if (n.type != ArrangementTree::NodeType::Leaf || !(n.crossing_weight > limit)) continue;
    int pick = -1;
    if (opts.max_min_split) {
      double best = -kInf;
      for (const auto& cs : n.crossing) {
        double s = smaller_side(c.tree, leaf, cs.line, opts.tol);
        if (s > best) {
          best = s;
          pick = cs.line;
        }
      }
    } else {
      std::size_t best = SIZE_MAX;
      for (const auto& cs : n.crossing) {
        if (rank[static_cast<std::size_t>(cs.line)] < best) {
          best = rank[static_cast<std::size_t>(cs.line)];
          pick = cs.line;
        }
      }
    }
    if (pick < 0) continue;
    std::vector<int> fresh;
    try {
      fresh = c.tree.split_leaf(leaf, c.tree.lines()[static_cast<std::size_t>(pick)].line, pick);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoCrossing) throw;
      // Numerically tangent: the line no longer counts as crossing this leaf.
      c.tree.remove_crossing(leaf, pick);
      work.push_back(leaf);
      continue;
    }
    for (int f : fresh) {
      if (c.tree.node(f).crossing_weight > limit) work.push_back(f);
    }
  }
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return c;
}

double brute_max_crossing(const Cutting& c) {
  double worst = 0.0;
  const auto& lines = c.tree.lines();
  for (int leaf : c.tree.leaves()) {
    double w = 0.0;
    for (const auto& wl : lines) {
      if (c.tree.node(leaf).region.classify(wl.line, c.tree.tolerance()) == Side::Crosses) {
        w += wl.weight;
      }
    }
    worst = std::max(worst, w);
  }
  return worst;
}

}  // namespace esample
