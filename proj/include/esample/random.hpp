#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace esample {

/// Seeded generator with platform-independent derived distributions.
///
/// std::uniform_real_distribution and friends are implementation-defined, so
/// everything that has to be byte-reproducible goes through the helpers here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix(seed)) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in (0, 1); never returns 0.
  double uniform_open() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). n must be positive.
  std::size_t below(std::size_t n);

  bool bernoulli(double p) { return uniform() < p; }

  /// Standard normal via Box-Muller.
  double normal();

  /// A child generator whose stream is independent of this one.
  Rng split() { return Rng(engine_() ^ 0x9e3779b97f4a7c15ULL); }

  static std::uint64_t mix(std::uint64_t x);

 private:
  std::mt19937_64 engine_;
};

/// k distinct indices drawn uniformly from [0, n), in draw order.
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, Rng& rng);

/// Fisher-Yates shuffle driven by Rng::below.
template <typename T>
void shuffle(std::span<T> items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::size_t j = rng.below(i);
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace esample
