#pragma once

#include <cstdint>

#include "occulp/chattering.hpp"
#include "occulp/model.hpp"
#include "occulp/policy.hpp"

namespace occulp {

struct SimulationOptions {
  std::uint64_t seed = 0;
  long episodes = 10000;
  double epsilon = 1e-6;  // truncation bias target beta^T max|r| / (1-beta) < epsilon
  int threads = 0;        // 0: OCCULP_THREADS environment variable, else all cores
};

struct SimulationResult {
  std::vector<double> estimates;      // -inf when sentinel pairs were hit on-path
  std::vector<double> std_errors;     // NaN for -inf entries
  std::vector<long> neg_inf_episodes; // per criterion
  long horizon = 0;
  long episodes = 0;
};

// Fixed-horizon Monte-Carlo estimate of the performance vector under a
// stationary policy. Per-episode substreams of a counter-based generator
// make results bit-identical for identical (seed, episodes, epsilon,
// policy) regardless of the thread count.
SimulationResult simulate(const FiniteCMDP& model, const RandomizedStationaryPolicy& policy,
                          const SimulationOptions& options);

// Chattering semantics: at each visit to s, selector j is drawn with
// probability gamma_j(s) independently, then the action f_j(s) is played.
SimulationResult simulate(const FiniteCMDP& model, const ChatteringPolicy& policy,
                          const SimulationOptions& options);

}  // namespace occulp
