#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "occulp/assumptions.hpp"
#include "occulp/model.hpp"
#include "occulp/policy.hpp"

namespace occulp {

// Grid parameters for the discretized continuous models.
struct DiscretizationSpec {
  int n_states = 41;        // state grid size (>= 2)
  double s_max = 10.0;      // state range upper bound
  int n_action_grid = 41;   // action grid size where A does not depend on s
  int n_quad = 64;          // quadrature node count (noise / density integration)
};

struct BuiltModel {
  FiniteCMDP model;
  WeightSpec weight;
  double clipped_mass = 0.0;  // worst per-row transition mass clipped at s_max
  std::vector<std::string> warnings;
};

// Resource-growth model with deterministic dynamics s' = sqrt(s - a) on a
// uniform grid over [0, s_max]; A(s) = grid points in [0, s]. Rewards
// r_0 = a - 1/a (-inf at a = 0) and r_1 = ln s (-inf at s = 0);
// w(s) = s + c. The initial state is the top grid point.
BuiltModel example1(double c, const DiscretizationSpec& spec, double beta, double d1);

// Stochastic growth model s' = s - a + sqrt(s - a) + xi with xi drawn from
// an exponential of mean m_bar (truncated at its 1 - 1e-8 quantile and
// discretized by equal-probability quadrature). r_0 = sqrt(a),
// r_1 = ln(s + 1), w(s) = s + c. Successors above s_max are clipped there
// and the clipped mass is reported; more than 1e-3 in a row raises a
// warning. The initial state is the grid point nearest 1.
BuiltModel example2(double c, double m_bar, const DiscretizationSpec& spec, double beta,
                    double d1);

using DensityFn = std::function<double(double t, double s, double a)>;
using CostFn = std::function<double(double s, double a)>;

// Repair model on [0,1]: action a in [0,1] is the repair intensity, the
// successor state has density g(t|s,a), the repair cost is c0(s,a) and the
// condition charge is the state itself. Minimization is flipped into the
// maximize convention: r_0 = -c0, r_1 = -s with bound -d1. Defaults:
// g = Beta(1 + 2(1-a), 1 + 2a) so heavier repair concentrates successors
// near 0, and c0 = a + a^2/2.
FiniteCMDP example3(const DiscretizationSpec& spec, double beta, double d1,
                    DensityFn density = nullptr, CostFn cost = nullptr);

enum class Example4Variant { I, II };

struct Example4Model {
  FiniteCMDP model;
  WeightSpec weight;
  int state_start = 0;      // 0*
  int state_zero = 1;       // 0
  int state_absorb = 2;     // 0**
  int first_numbered = 3;   // state of the integer n is first_numbered + n - 1

  // The policy pi_n choosing action 1/n at 0* (n = 1..N), or the action 0
  // when n == 0.
  RandomizedStationaryPolicy policy(int n) const;
  std::vector<RandomizedStationaryPolicy> policy_family() const;
};

// The counterexample MDP truncated at N: states {0*, 0, 0**, 1..N},
// A(0*) = {0} u {1/n}, q_n = 1/n (variant I) or 1/2^n (variant II);
// unconstrained (m = 0), mu = point mass at 0*, w = n on the numbered
// states and 1 elsewhere.
Example4Model example4(Example4Variant variant, int n_trunc, double beta);

// Seeded random instance: Dirichlet(1) transition rows, uniform rewards in
// reward_range, uniform mu, and constraint levels set to the performance of
// a random deterministic policy minus feasibility_margin (so positive
// margins make the instance feasible by construction).
FiniteCMDP random_cmdp(std::uint64_t seed, int n_states, int n_actions, int m,
                       std::pair<double, double> reward_range,
                       double feasibility_margin = 0.1);

// Random policy with Dirichlet(1) rows, for property tests.
RandomizedStationaryPolicy random_policy(const FiniteCMDP& model, std::uint64_t seed);

}  // namespace occulp
