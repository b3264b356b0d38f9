#include "occulp/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "occulp/simplex.hpp"
#include "occulp/tolerances.hpp"

namespace occulp {

std::vector<EnumeratedPolicy> enumerate_deterministic(const FiniteCMDP& model) {
  long count = 1;
  for (int s = 0; s < model.n_states; ++s) {
    count *= model.num_actions(s);
    if (count > 1000000) throw std::invalid_argument("policy enumeration guard exceeded");
  }

  std::vector<EnumeratedPolicy> out;
  out.reserve(static_cast<std::size_t>(count));
  DeterministicPolicy f(model.n_states, 0);
  while (true) {
    PerformanceVector v =
        evaluate_stationary(model, RandomizedStationaryPolicy::from_deterministic(model, f));
    out.push_back({f, std::move(v)});

    int s = 0;
    for (; s < model.n_states; ++s) {
      if (++f[s] < model.num_actions(s)) break;
      f[s] = 0;
    }
    if (s == model.n_states) break;
  }
  return out;
}

namespace {

// Mixture LP over the given policies: maximize sum alpha_j J_0(f_j) subject
// to the constraint rows and sum alpha = 1. Policies are assumed finite in
// every coordinate.
SimplexSolution solve_mixture(const FiniteCMDP& model, const std::vector<EnumeratedPolicy>& pool,
                              bool zero_objective) {
  const int m = model.num_constraints();
  const int n = static_cast<int>(pool.size());
  StandardLp lp;
  lp.eq_a.resize(1, n);
  lp.eq_b.resize(1);
  lp.eq_b(0) = 1.0;
  lp.ge_a.resize(m, n);
  lp.ge_b.resize(m);
  lp.obj.resize(n);
  for (int j = 0; j < n; ++j) {
    lp.eq_a(0, j) = 1.0;
    for (int i = 0; i < m; ++i) lp.ge_a(i, j) = pool[j].v[i + 1];
    lp.obj(j) = zero_objective ? 0.0 : pool[j].v[0];
  }
  for (int i = 0; i < m; ++i) lp.ge_b(i) = model.bounds[i];
  return solve_standard_lp(lp);
}

OracleResult from_solution(const std::vector<EnumeratedPolicy>& pool,
                           const SimplexSolution& sol) {
  OracleResult out;
  out.status = SolveStatus::Optimal;
  out.value = sol.objective;
  for (int j = 0; j < static_cast<int>(pool.size()); ++j)
    if (sol.x(j) > kStructuralTol) {
      out.alpha.push_back(sol.x(j));
      out.support.push_back(pool[j].f);
    }
  return out;
}

}  // namespace

OracleResult brute_force_cp(const FiniteCMDP& model) {
  require_valid(model);
  auto all = enumerate_deterministic(model);

  // A policy with J_i = -inf for some i >= 1 can never carry weight in a
  // feasible mixture; one with J_0 = -inf only matters for deciding between
  // infeasibility and a -inf optimum.
  std::vector<EnumeratedPolicy> finite_pool;
  std::vector<EnumeratedPolicy> constraint_ok_pool;
  for (auto& e : all) {
    bool constraints_ok = true;
    for (int i = 1; i < e.v.size(); ++i)
      if (is_neg_inf(e.v[i])) constraints_ok = false;
    if (!constraints_ok) continue;
    constraint_ok_pool.push_back(e);
    if (!is_neg_inf(e.v[0])) finite_pool.push_back(std::move(e));
  }

  OracleResult out;
  if (!finite_pool.empty()) {
    SimplexSolution sol = solve_mixture(model, finite_pool, /*zero_objective=*/false);
    if (sol.status == SimplexStatus::Optimal) return from_solution(finite_pool, sol);
    if (sol.status != SimplexStatus::Infeasible)
      throw std::runtime_error("mixture LP failed unexpectedly");
  }
  if (!constraint_ok_pool.empty()) {
    SimplexSolution relax = solve_mixture(model, constraint_ok_pool, /*zero_objective=*/true);
    if (relax.status == SimplexStatus::Optimal) {
      out = from_solution(constraint_ok_pool, relax);
      out.status = SolveStatus::MinusInfinityObjective;
      out.value = kNegInf;
      return out;
    }
    if (relax.status != SimplexStatus::Infeasible)
      throw std::runtime_error("mixture feasibility LP failed unexpectedly");
  }
  out.status = SolveStatus::Infeasible;
  return out;
}

}  // namespace occulp
