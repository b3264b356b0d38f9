#pragma once

#include <cmath>
#include <cstdint>

namespace occulp {

// Counter-based generator built from the splitmix64 finalizer. The output
// at position i depends only on (seed, stream, i), so independent streams
// can be evaluated in any order or in parallel and still produce identical
// results. Quality is adequate for Monte-Carlo sampling; it is not a
// cryptographic generator.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_(mix(mix(seed) ^ mix(stream ^ 0x9e3779b97f4a7c15ULL))) {}

  std::uint64_t next_u64() { return mix(key_ + (counter_++) * 0x9e3779b97f4a7c15ULL); }

  // Uniform on [0, 1) with 53 random bits.
  double next_uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on [lo, hi).
  double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_uniform(); }

  // Uniform integer in [0, n).
  int next_index(int n) { return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n)); }

  // Exponential with the given mean, by inversion.
  double next_exponential(double mean) {
    return -mean * std::log1p(-next_uniform());
  }

  // Draws an index from the discrete distribution given by `probs`
  // (assumed to sum to ~1); the final index absorbs rounding slack.
  template <class Container>
  int next_discrete(const Container& probs) {
    double u = next_uniform();
    double acc = 0.0;
    int last = 0;
    int i = 0;
    for (double p : probs) {
      if (p > 0.0) last = i;
      acc += p;
      if (u < acc) return i;
      ++i;
    }
    return last;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace occulp
