#pragma once

// Shared fixtures and independent oracles for the test suites. The oracles
// deliberately avoid the library's occupancy route: policy values come from
// the value-function linear system and optimal values from value iteration,
// so agreement with the implementation is a genuine cross-check.

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "occulp/model.hpp"
#include "occulp/policy.hpp"

namespace testutil {

using occulp::FiniteCMDP;
using occulp::PerformanceVector;
using occulp::RandomizedStationaryPolicy;

inline occulp::ActionLabel act(const std::string& name) { return {name, std::nullopt}; }

// Single state, single action, reward r0 (and optional constraint rewards).
inline FiniteCMDP one_state_model(double beta, std::vector<double> rewards_at_pair = {1.0}) {
  FiniteCMDP m;
  m.n_states = 1;
  m.beta = beta;
  m.mu = {1.0};
  m.actions = {{act("a")}};
  m.transition = {{{{0, 1.0}}}};
  for (double r : rewards_at_pair) m.rewards.push_back({{r}});
  m.bounds.assign(rewards_at_pair.size() - 1, -1e9);
  return m;
}

// Two states, deterministic chain s0 -> s1 -> s1, one action each.
inline FiniteCMDP chain_model(double beta) {
  FiniteCMDP m;
  m.n_states = 2;
  m.beta = beta;
  m.mu = {1.0, 0.0};
  m.actions = {{act("go")}, {act("stay")}};
  m.transition = {{{{1, 1.0}}}, {{{1, 1.0}}}};
  m.rewards = {{{1.0}, {0.0}}};
  return m;
}

// One state, two absorbing actions with the given rewards.
inline FiniteCMDP two_action_model(double beta, double r_left, double r_right) {
  FiniteCMDP m;
  m.n_states = 1;
  m.beta = beta;
  m.mu = {1.0};
  m.actions = {{act("left"), act("right")}};
  m.transition = {{{{0, 1.0}}, {{0, 1.0}}}};
  m.rewards = {{{r_left, r_right}}};
  return m;
}

// <mu, v> with (I - beta P_phi) v = r_phi, solved criterion by criterion.
// Returns -inf for a criterion whenever the policy assigns positive
// probability to a sentinel pair in a state reachable with positive
// discounted weight (detected through the occupancy-free forward pass).
inline PerformanceVector eval_value_system(const FiniteCMDP& m,
                                           const RandomizedStationaryPolicy& phi) {
  const int n = m.n_states;
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (int s = 0; s < n; ++s)
    for (int a = 0; a < m.num_actions(s); ++a)
      for (const auto& t : m.transition[s][a]) p(s, t.next) += phi.probs[s][a] * t.prob;

  Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n) - m.beta * p;
  Eigen::VectorXd mu(n);
  for (int s = 0; s < n; ++s) mu(s) = m.mu[s];

  // Discounted state weights under phi, for sentinel detection.
  Eigen::VectorXd weights = system.transpose().partialPivLu().solve(mu);

  PerformanceVector result;
  for (int i = 0; i < m.num_criteria(); ++i) {
    bool sentinel = false;
    Eigen::VectorXd reward = Eigen::VectorXd::Zero(n);
    for (int s = 0; s < n; ++s)
      for (int a = 0; a < m.num_actions(s); ++a) {
        if (phi.probs[s][a] == 0.0) continue;
        double r = m.rewards[i][s][a];
        if (occulp::is_neg_inf(r)) {
          if (weights(s) * phi.probs[s][a] > 1e-12) sentinel = true;
        } else {
          reward(s) += phi.probs[s][a] * r;
        }
      }
    if (sentinel) {
      result.values.push_back(occulp::kNegInf);
      continue;
    }
    Eigen::VectorXd v = system.partialPivLu().solve(reward);
    result.values.push_back(mu.dot(v));
  }
  return result;
}

// Optimal discounted value of the unconstrained problem (criterion 0) by
// value iteration, to within `tol` of the fixed point.
inline double vi_optimal_value(const FiniteCMDP& m, double tol = 1e-12) {
  const int n = m.n_states;
  std::vector<double> v(n, 0.0), next(n, 0.0);
  for (long iter = 0; iter < 10000000; ++iter) {
    double residual = 0.0;
    for (int s = 0; s < n; ++s) {
      double best = -std::numeric_limits<double>::infinity();
      for (int a = 0; a < m.num_actions(s); ++a) {
        double r = m.rewards[0][s][a];
        if (occulp::is_neg_inf(r)) continue;
        double total = r;
        for (const auto& t : m.transition[s][a]) total += m.beta * t.prob * v[t.next];
        best = std::max(best, total);
      }
      next[s] = best;
      residual = std::max(residual, std::abs(next[s] - v[s]));
    }
    v = next;
    if (residual * m.beta / (1.0 - m.beta) < tol) break;
  }
  double total = 0.0;
  for (int s = 0; s < n; ++s) total += m.mu[s] * v[s];
  return total;
}

// Expected T-step truncated occupancy table by forward recursion over the
// state-action distribution; converges to the occupancy measure as T grows.
inline std::vector<std::vector<double>> truncated_occupancy(const FiniteCMDP& m,
                                                            const RandomizedStationaryPolicy& phi,
                                                            int horizon) {
  std::vector<std::vector<double>> q(m.n_states);
  for (int s = 0; s < m.n_states; ++s) q[s].assign(m.actions[s].size(), 0.0);

  std::vector<double> dist = m.mu;
  double discount = 1.0;
  for (int t = 0; t < horizon; ++t) {
    std::vector<double> next(m.n_states, 0.0);
    for (int s = 0; s < m.n_states; ++s) {
      if (dist[s] == 0.0) continue;
      for (int a = 0; a < m.num_actions(s); ++a) {
        double w = dist[s] * phi.probs[s][a];
        if (w == 0.0) continue;
        q[s][a] += discount * w;
        for (const auto& tr : m.transition[s][a]) next[tr.next] += w * tr.prob;
      }
    }
    dist.swap(next);
    discount *= m.beta;
  }
  return q;
}

}  // namespace testutil
