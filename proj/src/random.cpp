#include "esample/random.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <unordered_map>

namespace esample {

std::uint64_t Rng::mix(std::uint64_t x) {
  // splitmix64 finalizer; spreads small consecutive seeds apart.
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::size_t Rng::below(std::size_t n) {
  // Lemire's multiply-shift with rejection.
  std::uint64_t range = n;
  __uint128_t m = static_cast<__uint128_t>(engine_()) * range;
  auto low = static_cast<std::uint64_t>(m);
  if (low < range) {
    std::uint64_t threshold = (0 - range) % range;
    while (low < threshold) {
      m = static_cast<__uint128_t>(engine_()) * range;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::size_t>(m >> 64);
}

double Rng::normal() {
  double u = uniform_open();
  double v = uniform();
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, Rng& rng) {
  if (k > n) k = n;
  std::vector<std::size_t> out;
  out.reserve(k);
  if (k * 4 >= n) {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t j = i + rng.below(n - i);
      std::swap(all[i], all[j]);
      out.push_back(all[i]);
    }
    return out;
  }
  // Sparse partial Fisher-Yates: only displaced slots are remembered.
  std::unordered_map<std::size_t, std::size_t> moved;
  moved.reserve(2 * k);
  auto slot = [&](std::size_t i) {
    auto it = moved.find(i);
    return it == moved.end() ? i : it->second;
  };
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = i + rng.below(n - i);
    std::size_t vi = slot(i);
    std::size_t vj = slot(j);
    moved[j] = vi;
    out.push_back(vj);
  }
  return out;
}

}  // namespace esample
