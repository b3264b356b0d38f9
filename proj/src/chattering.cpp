#include "occulp/chattering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "occulp/simplex.hpp"
#include "occulp/tolerances.hpp"

namespace occulp {

namespace {

constexpr int kEnumerationGuard = 4096;

// Greedy deterministic policy for an unconstrained MDP with the given
// per-pair reward, by value iteration. Sentinel pairs are effectively
// excluded unless a state has nothing else.
DeterministicPolicy greedy_policy(const FiniteCMDP& model,
                                  const std::vector<std::vector<double>>& reward) {
  const double kForbidden = -1e300;
  std::vector<double> value(model.n_states, 0.0);
  std::vector<double> next(model.n_states, 0.0);
  for (int iter = 0; iter < 100000; ++iter) {
    double residual = 0.0;
    for (int s = 0; s < model.n_states; ++s) {
      double best = -std::numeric_limits<double>::infinity();
      for (int a = 0; a < model.num_actions(s); ++a) {
        double r = std::isfinite(reward[s][a]) ? reward[s][a] : kForbidden;
        double total = r;
        for (const auto& t : model.transition[s][a]) total += model.beta * t.prob * value[t.next];
        best = std::max(best, total);
      }
      next[s] = best;
      residual = std::max(residual, std::abs(next[s] - value[s]));
    }
    value.swap(next);
    if (residual * model.beta / (1.0 - model.beta) < 1e-12 * std::max(1.0, std::abs(value[0])))
      break;
  }
  DeterministicPolicy f(model.n_states, 0);
  for (int s = 0; s < model.n_states; ++s) {
    double best = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < model.num_actions(s); ++a) {
      double r = std::isfinite(reward[s][a]) ? reward[s][a] : kForbidden;
      double total = r;
      for (const auto& t : model.transition[s][a]) total += model.beta * t.prob * value[t.next];
      if (total > best + 1e-12) {
        best = total;
        f[s] = a;
      }
    }
  }
  return f;
}

std::vector<std::vector<double>> scalarized_reward(const FiniteCMDP& model,
                                                   const std::vector<double>& lambda) {
  std::vector<std::vector<double>> reward(model.n_states);
  for (int s = 0; s < model.n_states; ++s) {
    reward[s].resize(model.actions[s].size());
    for (int a = 0; a < model.num_actions(s); ++a) {
      double total = model.rewards[0][s][a];
      for (int i = 0; i < model.num_constraints() && std::isfinite(total); ++i) {
        double ri = model.rewards[i + 1][s][a];
        if (is_neg_inf(ri))
          total = kNegInf;
        else
          total += lambda[i] * ri;
      }
      reward[s][a] = total;
    }
  }
  return reward;
}

}  // namespace

RandomizedStationaryPolicy ChatteringPolicy::as_stationary(const FiniteCMDP& model) const {
  RandomizedStationaryPolicy phi;
  phi.probs.resize(model.n_states);
  for (int s = 0; s < model.n_states; ++s) {
    phi.probs[s].assign(model.actions[s].size(), 0.0);
    for (int j = 0; j < size(); ++j) phi.probs[s][selectors[j][s]] += weights[s][j];
  }
  return phi;
}

std::vector<DeterministicPolicy> lagrangian_candidates(const FiniteCMDP& model,
                                                       const std::vector<double>& lagrange,
                                                       int cap) {
  const int m = model.num_constraints();
  std::set<DeterministicPolicy> seen;
  std::vector<DeterministicPolicy> out;

  // Perturbed multiplier vectors, enumerated smallest perturbation first.
  const double steps[] = {0.0, 1e-6, -1e-6, 1e-3, -1e-3};
  const int n_steps = static_cast<int>(std::size(steps));
  long combos = 1;
  for (int i = 0; i < m; ++i) combos *= n_steps;
  if (m == 0) combos = 1;

  for (long k = 0; k < combos && static_cast<int>(out.size()) < cap; ++k) {
    std::vector<double> lambda(lagrange);
    long rest = k;
    for (int i = 0; i < m; ++i) {
      int idx = static_cast<int>(rest % n_steps);
      rest /= n_steps;
      double scale = std::max(1.0, std::abs(lambda[i]));
      lambda[i] = std::max(0.0, lambda[i] + steps[idx] * scale);
    }
    DeterministicPolicy f = greedy_policy(model, scalarized_reward(model, lambda));
    if (seen.insert(f).second) out.push_back(std::move(f));
  }
  return out;
}

std::vector<DeterministicPolicy> candidate_policies(const FiniteCMDP& model,
                                                    const OccupancyMeasure& q_star,
                                                    const std::vector<double>* lagrange) {
  std::vector<std::vector<int>> supported(model.n_states);
  std::vector<int> randomized_states;
  DeterministicPolicy base(model.n_states, 0);

  for (int s = 0; s < model.n_states; ++s) {
    for (int a = 0; a < model.num_actions(s); ++a)
      if (q_star.q[s][a] > kLpTol) supported[s].push_back(a);
    if (supported[s].size() == 1) {
      base[s] = supported[s][0];
    } else if (supported[s].size() >= 2) {
      randomized_states.push_back(s);
    }
    // zero-marginal states keep the lowest-indexed action
  }

  long count = 1;
  for (int s : randomized_states) {
    count *= static_cast<long>(supported[s].size());
    if (count > kEnumerationGuard) break;
  }
  if (count > kEnumerationGuard) {
    if (lagrange == nullptr)
      throw std::runtime_error(
          "candidate enumeration exceeds 4096 selectors and no duals were "
          "provided for the Lagrangian fallback");
    return lagrangian_candidates(model, *lagrange);
  }

  std::vector<DeterministicPolicy> out;
  out.reserve(static_cast<std::size_t>(count));
  std::vector<std::size_t> odometer(randomized_states.size(), 0);
  while (true) {
    DeterministicPolicy f = base;
    for (std::size_t k = 0; k < randomized_states.size(); ++k)
      f[randomized_states[k]] = supported[randomized_states[k]][odometer[k]];
    out.push_back(std::move(f));

    std::size_t k = 0;
    for (; k < odometer.size(); ++k) {
      if (++odometer[k] < supported[randomized_states[k]].size()) break;
      odometer[k] = 0;
    }
    if (k == odometer.size()) break;
  }
  return out;
}

Decomposition decompose_performance(const FiniteCMDP& model, const PerformanceVector& target,
                                    const std::vector<DeterministicPolicy>& candidates) {
  const int m = model.num_constraints();
  if (target.size() != m + 1) throw std::invalid_argument("target has wrong length");
  for (double v : target.values)
    if (!std::isfinite(v))
      throw std::invalid_argument("decomposition targets must be finite vectors");

  // Evaluate candidates once; drop any with a -inf coordinate (they can
  // never carry positive weight against a finite target).
  std::vector<DeterministicPolicy> fs;
  std::vector<OccupancyMeasure> qs;
  std::vector<PerformanceVector> vs;
  for (const auto& f : candidates) {
    OccupancyMeasure q =
        occupancy_of_stationary(model, RandomizedStationaryPolicy::from_deterministic(model, f));
    PerformanceVector v = evaluate_from_occupancy(model, q);
    if (!v.all_finite()) continue;
    fs.push_back(f);
    qs.push_back(std::move(q));
    vs.push_back(std::move(v));
  }
  const int n = static_cast<int>(fs.size());
  if (n == 0) throw DecompositionInfeasible("no finite-valued candidates");

  // Route A: match the constraint coordinates exactly and push J_0 as high
  // as possible. A basic optimum has at most m+1 positive weights; if it
  // attains the target J_0 that is the decomposition we want.
  StandardLp lp;
  lp.eq_a.resize(m + 1, n);
  lp.eq_b.resize(m + 1);
  lp.obj.resize(n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < m; ++i) lp.eq_a(i, j) = vs[j][i + 1];
    lp.eq_a(m, j) = 1.0;
    lp.obj(j) = vs[j][0];
  }
  for (int i = 0; i < m; ++i) lp.eq_b(i) = target[i + 1];
  lp.eq_b(m) = 1.0;

  SimplexSolution sol = solve_standard_lp(lp);
  bool ok = sol.status == SimplexStatus::Optimal &&
            std::abs(sol.objective - target[0]) <= kCrossCheckTol;

  if (!ok) {
    // Route B: all coordinates as equalities (m+2 rows); a vertex uses at
    // most m+2 selectors. Covers feasible but non-optimal targets.
    StandardLp feas;
    feas.eq_a.resize(m + 2, n);
    feas.eq_b.resize(m + 2);
    feas.obj = Eigen::VectorXd::Zero(n);
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i <= m; ++i) feas.eq_a(i, j) = vs[j][i];
      feas.eq_a(m + 1, j) = 1.0;
    }
    for (int i = 0; i <= m; ++i) feas.eq_b(i) = target[i];
    feas.eq_b(m + 1) = 1.0;
    sol = solve_standard_lp(feas);
    if (sol.status != SimplexStatus::Optimal)
      throw DecompositionInfeasible("candidate set does not span the target performance vector");
  }

  Decomposition dec;
  double total = 0.0;
  for (int j = 0; j < n; ++j) {
    if (sol.x(j) <= kStructuralTol) continue;
    dec.selectors.push_back(fs[j]);
    dec.alpha.push_back(sol.x(j));
    dec.occupancies.push_back(qs[j]);
    dec.performances.push_back(vs[j]);
    total += sol.x(j);
  }
  for (double& a : dec.alpha) a /= total;

  // Residual check of the mixture identity.
  for (int i = 0; i <= m; ++i) {
    double value = 0.0;
    for (std::size_t j = 0; j < dec.alpha.size(); ++j) value += dec.alpha[j] * dec.performances[j][i];
    if (std::abs(value - target[i]) > kCrossCheckTol)
      throw DecompositionInfeasible("decomposition residual exceeds tolerance");
  }
  return dec;
}

ChatteringPolicy build_chattering(const FiniteCMDP& model, const Decomposition& dec) {
  const int n_sel = static_cast<int>(dec.selectors.size());
  if (n_sel == 0) throw std::invalid_argument("empty decomposition");

  std::vector<std::vector<double>> marginals(n_sel);
  for (int j = 0; j < n_sel; ++j) marginals[j] = dec.occupancies[j].state_marginal();

  ChatteringPolicy chat;
  chat.selectors = dec.selectors;
  chat.weights.resize(model.n_states);
  for (int s = 0; s < model.n_states; ++s) {
    chat.weights[s].assign(n_sel, 0.0);
    double mix = 0.0;
    for (int j = 0; j < n_sel; ++j) mix += dec.alpha[j] * marginals[j][s];
    if (mix > 0.0) {
      for (int j = 0; j < n_sel; ++j) chat.weights[s][j] = dec.alpha[j] * marginals[j][s] / mix;
    } else {
      chat.weights[s][0] = 1.0;
    }
  }
  return chat;
}

ChatteringReport verify_chattering(const FiniteCMDP& model, const ChatteringPolicy& chat,
                                   const PerformanceVector& target) {
  ChatteringReport report;
  for (const auto& row : chat.weights) {
    double total = 0.0;
    for (double g : row) {
      total += g;
      if (g < -kStructuralTol || g > 1.0 + kStructuralTol)
        report.max_weight_sum_error = std::max(report.max_weight_sum_error, 1.0);
    }
    report.max_weight_sum_error =
        std::max(report.max_weight_sum_error, std::abs(total - 1.0));
  }
  if (report.max_weight_sum_error > kStructuralTol) {
    // Broken weight rows are reported rather than evaluated; the induced
    // "policy" would not even be stochastic.
    report.max_deviation = std::numeric_limits<double>::infinity();
    report.pass = false;
    return report;
  }

  report.achieved = evaluate_stationary(model, chat.as_stationary(model));
  double deviation = 0.0;
  for (int i = 0; i < target.size(); ++i) {
    double a = report.achieved[i];
    double b = target[i];
    if (is_neg_inf(a) && is_neg_inf(b)) continue;
    if (is_neg_inf(a) || is_neg_inf(b)) {
      deviation = std::numeric_limits<double>::infinity();
      break;
    }
    deviation = std::max(deviation, std::abs(a - b));
  }
  report.max_deviation = deviation;
  report.pass = deviation <= 1e-6 && report.max_weight_sum_error <= kStructuralTol;
  return report;
}

ChatteringResult chattering_decompose(const FiniteCMDP& model, const SolveReport& report) {
  if (report.status != SolveStatus::Optimal)
    throw std::invalid_argument("chattering decomposition needs an optimal solve report");

  std::vector<DeterministicPolicy> candidates =
      candidate_policies(model, report.occupancy, &report.lagrange);

  ChatteringResult result;
  try {
    result.decomposition = decompose_performance(model, report.performance, candidates);
  } catch (const DecompositionInfeasible&) {
    // Extend with Lagrangian candidates and retry once.
    std::set<DeterministicPolicy> merged(candidates.begin(), candidates.end());
    for (auto& f : lagrangian_candidates(model, report.lagrange)) merged.insert(std::move(f));
    result.decomposition = decompose_performance(
        model, report.performance,
        std::vector<DeterministicPolicy>(merged.begin(), merged.end()));
  }
  result.policy = build_chattering(model, result.decomposition);
  result.report = verify_chattering(model, result.policy, report.performance);
  return result;
}

}  // namespace occulp
