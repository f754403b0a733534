#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace synth {

// splitmix64 step; used for seed derivation so parallel streams never share state.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) {
  return mix64(mix64(base ^ mix64(a)) ^ mix64(b ^ 0x5851f42d4c957f2dULL));
}

// Deterministic RNG wrapper. Real-valued draws are produced by explicit bit
// manipulation rather than std distributions, so results do not depend on the
// standard library implementation.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t bits() { return gen_(); }

  // uniform in [0, 1)
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  // uniform integer in [0, bound)
  std::uint64_t integer(std::uint64_t bound) {
    // multiply-shift; bias is < 2^-64 per draw, and identical across platforms
    unsigned __int128 m = static_cast<unsigned __int128>(gen_()) * bound;
    return static_cast<std::uint64_t>(m >> 64);
  }

  // index drawn with probability proportional to weights[i]; weights must be positive
  std::size_t weighted(const std::vector<double>& weights) {
    double total = 0;
    for (double w : weights) total += w;
    double r = unit() * total;
    double acc = 0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      acc += weights[i];
      if (r < acc) return i;
    }
    return weights.empty() ? 0 : weights.size() - 1;
  }

private:
  std::mt19937_64 gen_;
};

}  // namespace synth
