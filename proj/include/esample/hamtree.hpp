#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "esample/partition.hpp"

namespace esample {

struct HamCut {
  Line line;
  /// Max over the two sets of 2*|fraction above - 1/2|, with points on the
  /// line counted on whichever side balances best.
  double imbalance = 0.0;
};

/// Imbalance of one point set under a line (see HamCut). 0 for an empty set.
double cut_imbalance(std::span<const Point> pts, const Line& l, const Tolerance& tol = {});

/// Best of the C(t, 2) lines spanned by t points sampled jointly from A and
/// B; ties go to the earlier candidate. Throws TooFewPoints when A or B is
/// empty and InvalidArgument when t < 2.
HamCut approx_ham_sandwich(std::span<const Point> a, std::span<const Point> b, int t,
                           std::uint64_t seed);

inline constexpr int kDefaultHamT = 11;

/// Four-way tree: a steep median cut, then one approximate ham-sandwich cut
/// of both halves, recursively until every cell holds at most leaf_size
/// points.
Partition ham_tree(std::span<const Point> pts, std::size_t leaf_size, int t, std::uint64_t seed);

/// Pairs of sibling sets are cut jointly at every level; only the initial
/// pairing uses a median cut.
Partition double_ham_tree(std::span<const Point> pts, std::size_t leaf_size, int t,
                          std::uint64_t seed);

}  // namespace esample
