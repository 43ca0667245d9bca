#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "esample/hamtree.hpp"
#include "esample/partition.hpp"

namespace esample {

struct WeightedSample {
  std::vector<Point> points;
  /// Positive, summing to 1.
  std::vector<double> weights;
  std::string method;
  std::size_t k_requested = 0;
  /// Number of points actually returned (one per cell for partitions).
  std::size_t k_effective = 0;
  double seconds = 0.0;
};

/// One uniformly random point per cell, weighted by the cell's share of the
/// points. `pts` is the array the cells index into.
WeightedSample partition_sample(const Partition& part, std::span<const Point> pts, std::uint64_t seed);

enum class SampleMethod { Random, Mat, Chan, ChanSimple, Ham, DoubleHam };

SampleMethod parse_sample_method(const std::string& name);
std::string to_string(SampleMethod m);
std::vector<SampleMethod> all_sample_methods();

enum class Presample { Auto, On, Off };

Presample parse_presample(const std::string& name);

struct SampleOptions {
  /// Auto draws a random subset first when |X| > 10 k^2.
  Presample presample = Presample::Auto;
  double presample_c = 1.0;
  MatParams mat;
  ChanParams chan;
  int ham_t = kDefaultHamT;
};

/// Size of the random subset drawn before partitioning: c * k^2 / ln k,
/// capped at n.
std::size_t presample_size(std::size_t n, std::size_t k, double c = 1.0);

/// Throws InvalidK unless 2 <= k <= |X|.
WeightedSample epsilon_sample(std::span<const Point> pts, std::size_t k, SampleMethod method,
                              const SampleOptions& opts, std::uint64_t seed);

/// ceil(c * eps^(-4/3) * ln(1/eps)^(2/3)). Throws InvalidArgument unless
/// 0 < eps < 1.
std::size_t sample_size_for_epsilon(double eps, double c = 1.0);

inline constexpr std::size_t kExactErrorLimit = 5000;

/// max over halfplanes h of |weight of S in h - fraction of X in h|.
/// Throws TooLarge when |X| exceeds kExactErrorLimit.
double exact_error(std::span<const Point> x, const WeightedSample& s);

/// The same quantity by direct enumeration of every line through two of the
/// points, O(N^3). Testing oracle.
double brute_force_error(std::span<const Point> x, const WeightedSample& s);

/// exact_error restricted to halfplanes whose boundary passes through one of
/// `budget` randomly chosen points of X and S. Never exceeds exact_error,
/// equals it once budget covers every distinct point, and grows with budget
/// for a fixed seed.
double approx_error(std::span<const Point> x, const WeightedSample& s, std::size_t budget,
                    std::uint64_t seed);

struct LabeledPoints {
  std::vector<Point> points;
  std::vector<char> measured;
  std::vector<char> baseline;
  /// The planted halfplane: points on the `inside_above` side of boundary.
  Line boundary;
  bool inside_above = true;
  std::size_t inside_count = 0;

  bool inside(const Point& p) const;
};

struct PlantParams {
  double region_fraction = 0.02;
  double p_in = 0.7;
  double q_in = 0.3;
  double p_out = 0.5;
  double q_out = 0.5;
};

/// Picks a halfplane holding region_fraction of X along a random direction
/// and labels each point measured with probability p (inside) or p_out
/// (outside), otherwise baseline with probability q (q_out).
LabeledPoints plant_anomaly(std::span<const Point> pts, const PlantParams& params, std::uint64_t seed);

struct ScanResult {
  Line line;
  bool above = true;
  /// Phi of the chosen halfplane as estimated on the samples.
  double phi_sample = 0.0;
  /// Phi of the chosen halfplane on the full labeled data.
  double phi = 0.0;
  /// Phi of the planted halfplane on the full labeled data.
  double phi_planted = 0.0;
  double discrepancy_error = 0.0;
  double seconds = 0.0;
};

/// |m(h) - b(h)| over full data for one closed halfplane.
double scan_phi(const LabeledPoints& data, const Line& l, bool above);

/// Maximizes |m(h) - b(h)| estimated from the two samples over closed
/// halfplanes bounded by lines through pairs of a random net of the points.
/// Throws InvalidArgument when net_size < 2.
ScanResult scan_discrepancy(const LabeledPoints& data, const WeightedSample& measured,
                            const WeightedSample& baseline, std::size_t net_size, std::uint64_t seed);

inline constexpr std::size_t kDefaultNetSize = 400;

}  // namespace esample
