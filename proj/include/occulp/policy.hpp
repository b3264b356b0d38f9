#pragma once

#include <vector>

#include "occulp/model.hpp"

namespace occulp {

// Deterministic stationary policy: one action index per state.
using DeterministicPolicy = std::vector<int>;

// Randomized stationary policy: a probability vector over A(s) per state.
struct RandomizedStationaryPolicy {
  std::vector<std::vector<double>> probs;  // [s][a]

  static RandomizedStationaryPolicy from_deterministic(const FiniteCMDP& model,
                                                       const DeterministicPolicy& f);

  // Point-mass rows everywhere?
  bool is_deterministic(double tol = 1e-12) const;
};

// Expected discounted state-action visitation table Q(s,a) of a policy;
// total mass 1/(1-beta), flow identity against mu.
struct OccupancyMeasure {
  std::vector<std::vector<double>> q;  // [s][a] >= 0

  double total_mass() const;
  std::vector<double> state_marginal() const;
};

// Largest absolute violation of the flow identity
//   sum_a Q(s,a) - beta * sum_{s',a'} p(s|s',a') Q(s',a') = mu(s).
double flow_residual(const FiniteCMDP& model, const OccupancyMeasure& Q);

// Occupancy measure of a stationary policy, via the state-marginal linear
// system q = mu + beta * P_phi^T q solved by LU with partial pivoting,
// then Q(s,a) = q(s) * phi(a|s).
OccupancyMeasure occupancy_of_stationary(const FiniteCMDP& model,
                                         const RandomizedStationaryPolicy& phi);

// J_i = sum_{(s,a)} r_i(s,a) Q(s,a); the entry is -inf exactly when Q puts
// more than structural-tolerance mass on a pair with r_i = -inf.
PerformanceVector evaluate_from_occupancy(const FiniteCMDP& model, const OccupancyMeasure& Q);

PerformanceVector evaluate_stationary(const FiniteCMDP& model,
                                      const RandomizedStationaryPolicy& phi);

// Disintegration phi(a|s) = Q(s,a) / q(s). States with zero marginal get a
// point mass on the lowest-indexed action.
RandomizedStationaryPolicy extract_policy(const FiniteCMDP& model, const OccupancyMeasure& Q);

}  // namespace occulp
