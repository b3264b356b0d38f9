#include "occulp/lp.hpp"

#include <cmath>
#include <stdexcept>

#include "occulp/simplex.hpp"
#include "occulp/tolerances.hpp"

namespace occulp {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal:
      return "optimal";
    case SolveStatus::Infeasible:
      return "infeasible";
    case SolveStatus::MinusInfinityObjective:
      return "minus-infinity-objective";
  }
  return "unknown";
}

LinearProgram build_lp(const FiniteCMDP& model) {
  LinearProgram lp;
  lp.beta = model.beta;
  lp.n_states = model.n_states;

  lp.var_of.resize(model.n_states);
  for (int s = 0; s < model.n_states; ++s) {
    lp.var_of[s].resize(model.actions[s].size());
    for (int a = 0; a < model.num_actions(s); ++a) {
      lp.var_of[s][a] = lp.num_vars();
      lp.pairs.emplace_back(s, a);
    }
  }
  const int n_vars = lp.num_vars();
  const int m = model.num_constraints();

  lp.flow.setZero(model.n_states, n_vars);
  for (int v = 0; v < n_vars; ++v) {
    auto [s, a] = lp.pairs[v];
    lp.flow(s, v) += 1.0;
    for (const auto& t : model.transition[s][a]) lp.flow(t.next, v) -= model.beta * t.prob;
  }
  lp.flow_rhs.resize(model.n_states);
  for (int s = 0; s < model.n_states; ++s) lp.flow_rhs(s) = model.mu[s];

  lp.forced_zero.assign(n_vars, 0);
  lp.obj_neg_inf.assign(n_vars, 0);
  lp.objective.setZero(n_vars);
  lp.reward_ge.setZero(m, n_vars);
  lp.reward_rhs.resize(m);
  for (int i = 0; i < m; ++i) lp.reward_rhs(i) = model.bounds[i];

  for (int v = 0; v < n_vars; ++v) {
    auto [s, a] = lp.pairs[v];
    double r0 = model.rewards[0][s][a];
    if (is_neg_inf(r0))
      lp.obj_neg_inf[v] = 1;
    else
      lp.objective(v) = r0;
    for (int i = 0; i < m; ++i) {
      double ri = model.rewards[i + 1][s][a];
      if (is_neg_inf(ri)) {
        // Any positive mass here makes J_i = -inf < d_i.
        lp.forced_zero[v] = 1;
      } else {
        lp.reward_ge(i, v) = ri;
      }
    }
  }
  return lp;
}

namespace {

// Solves the LP restricted to the given columns. `keep` maps reduced-column
// index -> original variable index.
SimplexSolution solve_restricted(const LinearProgram& lp, const std::vector<int>& keep,
                                 bool zero_objective) {
  StandardLp std_lp;
  const int n_keep = static_cast<int>(keep.size());
  std_lp.eq_a.resize(lp.flow.rows(), n_keep);
  std_lp.ge_a.resize(lp.reward_ge.rows(), n_keep);
  std_lp.obj.resize(n_keep);
  for (int j = 0; j < n_keep; ++j) {
    std_lp.eq_a.col(j) = lp.flow.col(keep[j]);
    std_lp.ge_a.col(j) = lp.reward_ge.col(keep[j]);
    std_lp.obj(j) = zero_objective ? 0.0 : lp.objective(keep[j]);
  }
  std_lp.eq_b = lp.flow_rhs;
  std_lp.ge_b = lp.reward_rhs;

  // Crash basis from a deterministic policy: the lowest kept action per
  // state. Its flow block is nonsingular with a nonnegative marginal, so
  // phase 1 only has to repair violated reward rows.
  std_lp.eq_basis_hint.assign(lp.n_states, -1);
  for (int j = 0; j < n_keep; ++j) {
    int s = lp.pairs[keep[j]].first;
    if (std_lp.eq_basis_hint[s] < 0) std_lp.eq_basis_hint[s] = j;
  }
  return solve_standard_lp(std_lp);
}

void fill_primal(const LinearProgram& lp, const std::vector<int>& keep,
                 const SimplexSolution& sol, LpSolution& out) {
  out.q.resize(lp.n_states);
  for (int s = 0; s < lp.n_states; ++s) out.q[s].assign(lp.var_of[s].size(), 0.0);
  for (int j = 0; j < static_cast<int>(keep.size()); ++j) {
    auto [s, a] = lp.pairs[keep[j]];
    out.q[s][a] = sol.x(j);
  }
  out.dual_flow.assign(sol.dual_eq.data(), sol.dual_eq.data() + sol.dual_eq.size());
  out.dual_reward.assign(sol.dual_ge.data(), sol.dual_ge.data() + sol.dual_ge.size());
  out.lagrange.resize(out.dual_reward.size());
  for (std::size_t i = 0; i < out.dual_reward.size(); ++i)
    out.lagrange[i] = std::max(0.0, -out.dual_reward[i]);
  out.objective = sol.objective;
  out.primal_residual = sol.primal_residual;
  out.dual_violation = sol.dual_violation;
  out.duality_gap = sol.duality_gap;
}

}  // namespace

LpSolution solve_lp(const LinearProgram& lp) {
  LpSolution out;

  std::vector<int> finite_cols;
  bool has_obj_neg_inf = false;
  for (int v = 0; v < lp.num_vars(); ++v) {
    if (lp.forced_zero[v]) continue;
    if (lp.obj_neg_inf[v]) {
      has_obj_neg_inf = true;
      continue;
    }
    finite_cols.push_back(v);
  }

  SimplexSolution sol = solve_restricted(lp, finite_cols, /*zero_objective=*/false);
  out.iterations = sol.iterations;
  switch (sol.status) {
    case SimplexStatus::Optimal:
      out.status = SolveStatus::Optimal;
      fill_primal(lp, finite_cols, sol, out);
      return out;
    case SimplexStatus::Infeasible:
      break;
    case SimplexStatus::Unbounded:
      // The feasible set has fixed total mass 1/(1-beta); unboundedness
      // cannot occur for a well-formed occupancy LP.
      throw std::runtime_error("simplex reported an unbounded occupancy LP");
    case SimplexStatus::IterationLimit:
      throw std::runtime_error("simplex iteration limit reached");
  }

  if (!has_obj_neg_inf) {
    out.status = SolveStatus::Infeasible;
    return out;
  }

  // Feasibility including the r_0 = -inf pairs decides between plain
  // infeasibility and a -inf optimal value.
  std::vector<int> all_allowed;
  for (int v = 0; v < lp.num_vars(); ++v)
    if (!lp.forced_zero[v]) all_allowed.push_back(v);
  SimplexSolution relax = solve_restricted(lp, all_allowed, /*zero_objective=*/true);
  out.iterations += relax.iterations;
  if (relax.status == SimplexStatus::Optimal) {
    out.status = SolveStatus::MinusInfinityObjective;
    fill_primal(lp, all_allowed, relax, out);
    out.objective = kNegInf;
  } else if (relax.status == SimplexStatus::Infeasible) {
    out.status = SolveStatus::Infeasible;
  } else {
    throw std::runtime_error("simplex failed on the feasibility sub-problem");
  }
  return out;
}

SolveReport solve_cp(const FiniteCMDP& model) {
  require_valid(model);

  LinearProgram lp = build_lp(model);
  LpSolution sol = solve_lp(lp);

  SolveReport report;
  report.status = sol.status;
  report.iterations = sol.iterations;
  report.dual_reward = sol.dual_reward;
  report.lagrange = sol.lagrange;
  report.objective = sol.objective;
  report.primal_residual = sol.primal_residual;
  report.dual_violation = sol.dual_violation;
  report.duality_gap = sol.duality_gap;
  if (sol.status == SolveStatus::Infeasible) return report;

  report.occupancy.q = sol.q;
  report.policy = extract_policy(model, report.occupancy);
  report.performance = evaluate_from_occupancy(model, report.occupancy);

  if (sol.status == SolveStatus::Optimal) {
    // Internal consistency: the reported optimum must satisfy the occupancy
    // invariants and the constraint levels it claims to satisfy.
    double mass_err =
        std::abs(report.occupancy.total_mass() - 1.0 / (1.0 - model.beta));
    if (mass_err > kLpTol || flow_residual(model, report.occupancy) > kLpTol)
      throw std::runtime_error("optimal occupancy violates its invariants");
    for (int i = 0; i < model.num_constraints(); ++i)
      if (!(report.performance[i + 1] >= model.bounds[i] - kLpTol))
        throw std::runtime_error("optimal solution violates a constraint level");
  }
  return report;
}

}  // namespace occulp
