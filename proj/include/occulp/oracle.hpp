#pragma once

#include <vector>

#include "occulp/lp.hpp"
#include "occulp/model.hpp"
#include "occulp/policy.hpp"

namespace occulp {

struct EnumeratedPolicy {
  DeterministicPolicy f;
  PerformanceVector v;
};

// Exhaustive enumeration of F with performance vectors; guarded at 10^6
// policies (throws std::invalid_argument beyond).
std::vector<EnumeratedPolicy> enumerate_deterministic(const FiniteCMDP& model);

struct OracleResult {
  SolveStatus status = SolveStatus::Infeasible;
  double value = 0.0;
  std::vector<double> alpha;                  // mixture weights over `support`
  std::vector<DeterministicPolicy> support;   // policies carrying positive weight
};

// Ground truth for tiny instances: the constrained optimum over convex
// combinations of deterministic performance vectors, solved as a small LP
// over mixture weights with the same simplex core as the occupancy route.
OracleResult brute_force_cp(const FiniteCMDP& model);

}  // namespace occulp
