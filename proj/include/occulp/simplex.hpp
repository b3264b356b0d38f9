#pragma once

#include <Eigen/Dense>

namespace occulp {

// maximize obj'x  subject to  eq_a x = eq_b,  ge_a x >= ge_b,  x >= 0.
// Either constraint block may be empty (0 rows).
struct StandardLp {
  Eigen::MatrixXd eq_a;
  Eigen::VectorXd eq_b;
  Eigen::MatrixXd ge_a;
  Eigen::VectorXd ge_b;
  Eigen::VectorXd obj;

  // Optional crash basis: one structural column per equality row (-1 keeps
  // an artificial in that slot). Verified numerically; ignored when it does
  // not produce a feasible starting basis.
  std::vector<int> eq_basis_hint;
};

enum class SimplexStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct SimplexSolution {
  SimplexStatus status = SimplexStatus::IterationLimit;
  Eigen::VectorXd x;        // structural variables (basic feasible at Optimal)
  Eigen::VectorXd dual_eq;  // duals of equality rows
  Eigen::VectorXd dual_ge;  // duals of >= rows; <= 0 at a maximum
  double objective = 0.0;
  long iterations = 0;

  // Optimality certificate residuals.
  double primal_residual = 0.0;  // max |Ax - b|
  double dual_violation = 0.0;   // largest positive reduced cost among nonbasic columns
  double duality_gap = 0.0;      // |obj - y'b|
};

// Dense revised two-phase simplex with an explicit basis inverse.
// Dantzig pricing with a Bland fallback under sustained degeneracy, so the
// method cannot cycle; pivot tolerance is the shared LP tolerance.
SimplexSolution solve_standard_lp(const StandardLp& lp);

}  // namespace occulp
