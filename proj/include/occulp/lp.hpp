#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "occulp/model.hpp"
#include "occulp/policy.hpp"

namespace occulp {

// The occupancy-measure linear program: one variable per feasible pair,
// flow-identity equalities (one per state) and one >= row per constraint
// reward. Pairs whose constraint reward is the -inf sentinel are forced to
// zero; pairs whose r_0 is -inf stay in the variable set but are flagged so
// the solver can run the finite-objective sub-problem first.
struct LinearProgram {
  std::vector<std::pair<int, int>> pairs;  // variable -> (state, action)
  std::vector<std::vector<int>> var_of;    // (state, action) -> variable

  Eigen::MatrixXd flow;        // n_states x n_vars
  Eigen::VectorXd flow_rhs;    // mu
  Eigen::MatrixXd reward_ge;   // m x n_vars
  Eigen::VectorXd reward_rhs;  // d_1..d_m
  Eigen::VectorXd objective;   // r_0 where finite, 0 on flagged pairs

  std::vector<char> forced_zero;  // some r_i (i >= 1) is -inf
  std::vector<char> obj_neg_inf;  // r_0 is -inf

  double beta = 0.0;
  int n_states = 0;

  int num_vars() const { return static_cast<int>(pairs.size()); }
};

LinearProgram build_lp(const FiniteCMDP& model);

enum class SolveStatus { Optimal, Infeasible, MinusInfinityObjective };

const char* to_string(SolveStatus s);

struct LpSolution {
  SolveStatus status = SolveStatus::Infeasible;
  std::vector<std::vector<double>> q;  // primal occupancy table, per (s,a)
  std::vector<double> dual_flow;       // per-state duals
  std::vector<double> dual_reward;     // per constraint row; <= 0 at a maximum
  std::vector<double> lagrange;        // multipliers for J_i >= d_i (>= 0)
  double objective = 0.0;
  long iterations = 0;
  double primal_residual = 0.0;
  double dual_violation = 0.0;
  double duality_gap = 0.0;
};

// Two-phase dense revised simplex over the LP. On Infeasible for the
// finite-objective sub-problem, feasibility including the r_0 = -inf pairs
// distinguishes MinusInfinityObjective from plain infeasibility.
LpSolution solve_lp(const LinearProgram& lp);

// Full pipeline report for problem (CP).
struct SolveReport {
  SolveStatus status = SolveStatus::Infeasible;
  OccupancyMeasure occupancy;         // Q*
  RandomizedStationaryPolicy policy;  // phi*
  PerformanceVector performance;      // V*
  std::vector<double> dual_reward;
  std::vector<double> lagrange;
  long iterations = 0;
  double objective = 0.0;
  double primal_residual = 0.0;
  double dual_violation = 0.0;
  double duality_gap = 0.0;
};

// Validates, builds and solves the LP, extracts the optimal stationary
// policy by disintegration and evaluates its performance vector. Throws
// std::invalid_argument when validation fails.
SolveReport solve_cp(const FiniteCMDP& model);

}  // namespace occulp
