#pragma once

#include <stdexcept>
#include <vector>

#include "occulp/lp.hpp"
#include "occulp/model.hpp"
#include "occulp/policy.hpp"

namespace occulp {

// A randomized stationary policy written as a state-weighted mixture of
// deterministic selectors: phi(.|s) = sum_j gamma_j(s) * delta_{f_j(s)}.
struct ChatteringPolicy {
  std::vector<DeterministicPolicy> selectors;  // f_1..f_N
  std::vector<std::vector<double>> weights;    // [s][j], rows sum to 1

  int size() const { return static_cast<int>(selectors.size()); }
  RandomizedStationaryPolicy as_stationary(const FiniteCMDP& model) const;
};

// A convex combination of deterministic-policy occupancies matching a
// target performance vector.
struct Decomposition {
  std::vector<DeterministicPolicy> selectors;
  std::vector<double> alpha;                    // > 0, sums to 1
  std::vector<OccupancyMeasure> occupancies;    // Q^{f_j}
  std::vector<PerformanceVector> performances;  // V(f_j)
};

struct DecompositionInfeasible : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Deterministic selectors spanning the face of the occupancy polytope that
// contains Q_star: every combination of supported actions at the randomized
// states, the unique supported action elsewhere, and the lowest-indexed
// action at zero-marginal states. If the combination count exceeds the
// guard (4096) the Lagrangian fallback generates candidates instead, which
// needs the LP duals.
std::vector<DeterministicPolicy> candidate_policies(const FiniteCMDP& model,
                                                    const OccupancyMeasure& q_star,
                                                    const std::vector<double>* lagrange = nullptr);

// Greedy policies of the unconstrained MDPs with scalarized reward
// r_0 + sum_i lambda_i r_i, at the given multipliers and small
// perturbations, capped and deduplicated.
std::vector<DeterministicPolicy> lagrangian_candidates(const FiniteCMDP& model,
                                                       const std::vector<double>& lagrange,
                                                       int cap = 64);

// Finds alpha >= 0, sum 1, with sum_j alpha_j V(f_j) = target. For targets
// on the optimal face this uses at most m+1 selectors (basic solution of an
// LP with m+1 rows that maximizes the J_0 coordinate); arbitrary feasible
// targets may need m+2. Throws DecompositionInfeasible when the candidates
// do not span the target.
Decomposition decompose_performance(const FiniteCMDP& model, const PerformanceVector& target,
                                    const std::vector<DeterministicPolicy>& candidates);

// gamma_j(s) = alpha_j * q^{f_j}(s) / q_mix(s); states outside the support
// of the mixture marginal get gamma_1 = 1.
ChatteringPolicy build_chattering(const FiniteCMDP& model, const Decomposition& dec);

struct ChatteringReport {
  double max_deviation = 0.0;        // |V(chattering) - target|, coordinate-wise sup
  double max_weight_sum_error = 0.0; // |sum_j gamma_j(s) - 1|, sup over states
  bool pass = false;
  PerformanceVector achieved;
};

// Re-evaluates the chattering policy through policy evaluation and compares
// against the target; pass requires deviation <= 1e-6 and exact weight rows.
ChatteringReport verify_chattering(const FiniteCMDP& model, const ChatteringPolicy& chat,
                                   const PerformanceVector& target);

struct ChatteringResult {
  Decomposition decomposition;
  ChatteringPolicy policy;
  ChatteringReport report;
};

// Full pipeline from an optimal solve report; retries with Lagrangian
// candidates when the enumerated set does not span the target.
ChatteringResult chattering_decompose(const FiniteCMDP& model, const SolveReport& report);

}  // namespace occulp
