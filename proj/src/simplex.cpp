#include "occulp/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "occulp/tolerances.hpp"

namespace occulp {

namespace {

constexpr double kPivotTol = kLpTol;
constexpr double kDegenerateStep = 1e-12;
constexpr int kBlandSwitchAfter = 30;
constexpr int kRefactorEvery = 64;

class RevisedSimplex {
 public:
  explicit RevisedSimplex(const StandardLp& lp) {
    const int n_eq = static_cast<int>(lp.eq_b.size());
    const int n_ge = static_cast<int>(lp.ge_b.size());
    rows_ = n_eq + n_ge;
    n_struct_ = static_cast<int>(lp.obj.size());
    n_head_ = n_struct_ + n_ge;  // structural + surplus

    a_.setZero(rows_, n_head_);
    b_.resize(rows_);
    if (n_eq > 0) {
      a_.topLeftCorner(n_eq, n_struct_) = lp.eq_a;
      b_.head(n_eq) = lp.eq_b;
    }
    if (n_ge > 0) {
      a_.bottomLeftCorner(n_ge, n_struct_) = lp.ge_a;
      for (int r = 0; r < n_ge; ++r) a_(n_eq + r, n_struct_ + r) = -1.0;  // surplus
      b_.tail(n_ge) = lp.ge_b;
    }

    flip_.assign(rows_, 1.0);
    for (int r = 0; r < rows_; ++r) {
      if (b_(r) < 0.0) {
        a_.row(r) *= -1.0;
        b_(r) *= -1.0;
        flip_[r] = -1.0;
      }
    }

    cost_.setZero(n_head_);
    cost_.head(n_struct_) = lp.obj;

    // Crash basis: a surplus column whose row was flipped enters with a +1
    // coefficient and can seed the basis; every other row gets an artificial.
    basis_.resize(rows_);
    is_basic_.assign(n_head_, false);
    for (int r = 0; r < rows_; ++r) {
      const int surplus = (r >= n_eq) ? n_struct_ + (r - n_eq) : -1;
      if (surplus >= 0 && a_(r, surplus) > 0.5) {
        basis_[r] = surplus;
        is_basic_[surplus] = true;
      } else {
        basis_[r] = n_head_ + r;  // artificial, column e_r
      }
    }
    binv_ = Eigen::MatrixXd::Identity(rows_, rows_);
    xb_ = b_;
    n_eq_ = n_eq;

    if (static_cast<int>(lp.eq_basis_hint.size()) == n_eq && rows_ > 0)
      try_crash_basis(lp.eq_basis_hint, n_eq, n_ge);
  }

  SimplexSolution run() {
    SimplexSolution sol;
    if (rows_ == 0) {
      // No constraints: optimum is x = 0 unless some objective coefficient
      // is positive, in which case the problem is unbounded.
      sol.status = (cost_.size() > 0 && cost_.maxCoeff() > kPivotTol)
                       ? SimplexStatus::Unbounded
                       : SimplexStatus::Optimal;
      sol.x = Eigen::VectorXd::Zero(n_struct_);
      return sol;
    }

    // Phase 1: maximize minus the sum of artificial values.
    Eigen::VectorXd phase1_cost = Eigen::VectorXd::Zero(n_head_);
    SimplexStatus phase1 = iterate(phase1_cost, /*artificial_cost=*/-1.0, sol.iterations);
    if (phase1 == SimplexStatus::IterationLimit) {
      sol.status = phase1;
      return sol;
    }
    double infeasibility = 0.0;
    for (int r = 0; r < rows_; ++r)
      if (basis_[r] >= n_head_) infeasibility += std::max(xb_(r), 0.0);
    if (infeasibility > kPivotTol * std::max(1.0, b_.lpNorm<Eigen::Infinity>())) {
      sol.status = SimplexStatus::Infeasible;
      return sol;
    }
    drive_out_artificials();

    // Phase 2: the real objective; artificials (if any survive on redundant
    // rows) carry zero cost and are pinned at level zero by the ratio test.
    SimplexStatus phase2 = iterate(cost_, /*artificial_cost=*/0.0, sol.iterations);
    if (phase2 != SimplexStatus::Optimal) {
      sol.status = phase2;
      return sol;
    }

    sol.status = SimplexStatus::Optimal;
    sol.x = Eigen::VectorXd::Zero(n_struct_);
    for (int r = 0; r < rows_; ++r)
      if (basis_[r] < n_struct_) sol.x(basis_[r]) = std::max(xb_(r), 0.0);
    sol.objective = cost_.head(n_struct_).dot(sol.x);

    // Duals and certificate residuals.
    Eigen::VectorXd cb = basic_costs(cost_, 0.0);
    Eigen::VectorXd y = binv_.transpose() * cb;
    Eigen::VectorXd reduced = cost_ - a_.transpose() * y;
    double violation = 0.0;
    for (int j = 0; j < n_head_; ++j)
      if (!is_basic_[j]) violation = std::max(violation, reduced(j));
    sol.dual_violation = violation;
    sol.duality_gap = std::abs(sol.objective - y.dot(b_));

    Eigen::VectorXd x_full = Eigen::VectorXd::Zero(n_head_);
    for (int r = 0; r < rows_; ++r)
      if (basis_[r] < n_head_) x_full(basis_[r]) = std::max(xb_(r), 0.0);
    sol.primal_residual = (a_ * x_full - b_).cwiseAbs().maxCoeff();

    sol.dual_eq.resize(n_eq_);
    sol.dual_ge.resize(rows_ - n_eq_);
    for (int r = 0; r < rows_; ++r) {
      double value = y(r) * flip_[r];
      if (r < n_eq_)
        sol.dual_eq(r) = value;
      else
        sol.dual_ge(r - n_eq_) = value;
    }
    return sol;
  }

 private:
  // Seats the hint columns on the equality rows and a surplus or artificial
  // on each >= row, picked by the sign of the start value. Keeps the default
  // all-artificial crash when the hinted basis is singular or infeasible.
  void try_crash_basis(const std::vector<int>& hint, int n_eq, int n_ge) {
    std::vector<int> candidate(rows_);
    std::vector<bool> used(n_head_, false);
    for (int r = 0; r < n_eq; ++r) {
      int col = hint[r];
      if (col >= n_struct_ || (col >= 0 && used[col])) return;  // malformed hint
      candidate[r] = (col < 0) ? n_head_ + r : col;
      if (col >= 0) used[col] = true;
    }
    for (int r = 0; r < n_ge; ++r) candidate[n_eq + r] = n_struct_ + r;  // surplus

    auto solve_candidate = [&](Eigen::MatrixXd& binv, Eigen::VectorXd& xb) {
      Eigen::MatrixXd basis_matrix(rows_, rows_);
      for (int r = 0; r < rows_; ++r) {
        if (candidate[r] < n_head_)
          basis_matrix.col(r) = a_.col(candidate[r]);
        else
          basis_matrix.col(r) = Eigen::VectorXd::Unit(rows_, candidate[r] - n_head_);
      }
      Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis_matrix);
      binv = lu.inverse();
      xb = binv * b_;
      return (basis_matrix * xb - b_).cwiseAbs().maxCoeff() <=
             1e-7 * std::max(1.0, b_.lpNorm<Eigen::Infinity>());
    };

    Eigen::MatrixXd binv;
    Eigen::VectorXd xb;
    if (!solve_candidate(binv, xb)) return;

    // A >= row whose surplus starts negative gets its artificial instead
    // (the artificial carries the opposite sign, so one of the two works).
    bool swapped = false;
    for (int r = n_eq; r < rows_; ++r)
      if (xb(r) < -kPivotTol) {
        candidate[r] = n_head_ + r;
        swapped = true;
      }
    if (swapped && !solve_candidate(binv, xb)) return;

    for (int r = 0; r < rows_; ++r) {
      if (xb(r) < -kPivotTol) return;  // still infeasible: keep the default
      if (xb(r) < 0.0) xb(r) = 0.0;
    }

    for (int r = 0; r < rows_; ++r)
      if (basis_[r] < n_head_) is_basic_[basis_[r]] = false;
    basis_ = candidate;
    for (int r = 0; r < rows_; ++r)
      if (basis_[r] < n_head_) is_basic_[basis_[r]] = true;
    binv_ = std::move(binv);
    xb_ = std::move(xb);
  }

  Eigen::VectorXd basic_costs(const Eigen::VectorXd& head_cost, double artificial_cost) const {
    Eigen::VectorXd cb(rows_);
    for (int r = 0; r < rows_; ++r)
      cb(r) = (basis_[r] < n_head_) ? head_cost(basis_[r]) : artificial_cost;
    return cb;
  }

  // Runs simplex iterations for the given objective until no entering column
  // remains (Optimal), the problem is detected unbounded, or the safety cap
  // trips.
  SimplexStatus iterate(const Eigen::VectorXd& head_cost, double artificial_cost,
                        long& iteration_counter) {
    const long cap = 2000 + 200L * (rows_ + n_head_);
    bool bland = false;
    int degenerate_run = 0;
    int since_refactor = 0;

    for (long iter = 0; iter < cap; ++iter, ++iteration_counter) {
      Eigen::VectorXd cb = basic_costs(head_cost, artificial_cost);
      Eigen::VectorXd y = binv_.transpose() * cb;
      Eigen::VectorXd reduced = head_cost - a_.transpose() * y;

      int entering = -1;
      if (bland) {
        for (int j = 0; j < n_head_; ++j)
          if (!is_basic_[j] && reduced(j) > kPivotTol) {
            entering = j;
            break;
          }
      } else {
        double best = kPivotTol;
        for (int j = 0; j < n_head_; ++j)
          if (!is_basic_[j] && reduced(j) > best) {
            best = reduced(j);
            entering = j;
          }
      }
      if (entering < 0) return SimplexStatus::Optimal;

      Eigen::VectorXd direction = binv_ * a_.col(entering);

      // Ratio test; zero-level artificial rows leave first on any usable
      // pivot so they can never climb back above zero.
      double theta = std::numeric_limits<double>::infinity();
      int leave = -1;
      for (int r = 0; r < rows_; ++r) {
        const bool artificial = basis_[r] >= n_head_;
        const double u = direction(r);
        double candidate;
        if (artificial && std::abs(u) > kPivotTol && xb_(r) <= kPivotTol) {
          candidate = 0.0;
        } else if (u > kPivotTol) {
          candidate = std::max(xb_(r), 0.0) / u;
        } else {
          continue;
        }
        if (candidate < theta - kDegenerateStep ||
            (candidate < theta + kDegenerateStep && (leave < 0 || basis_[r] < basis_[leave]))) {
          theta = candidate;
          leave = r;
        }
      }
      if (leave < 0) return SimplexStatus::Unbounded;

      // Pivot.
      const double pivot = direction(leave);
      int leaving_col = basis_[leave];
      if (leaving_col < n_head_) is_basic_[leaving_col] = false;
      basis_[leave] = entering;
      is_basic_[entering] = true;

      Eigen::RowVectorXd pivot_row = binv_.row(leave) / pivot;
      for (int r = 0; r < rows_; ++r) {
        if (r == leave) continue;
        binv_.row(r) -= direction(r) * pivot_row;
      }
      binv_.row(leave) = pivot_row;

      for (int r = 0; r < rows_; ++r) {
        if (r == leave) continue;
        xb_(r) -= theta * direction(r);
        if (xb_(r) < 0.0 && xb_(r) > -kPivotTol) xb_(r) = 0.0;
      }
      xb_(leave) = theta;

      if (++since_refactor >= kRefactorEvery) {
        refactor();
        since_refactor = 0;
      }

      if (theta <= kDegenerateStep) {
        if (++degenerate_run >= kBlandSwitchAfter) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }
    }
    return SimplexStatus::IterationLimit;
  }

  // Pivot zero-level artificials out of the basis wherever a structural or
  // surplus column has a usable entry in their row; rows where none exists
  // are redundant and keep the artificial at level zero.
  void drive_out_artificials() {
    for (int r = 0; r < rows_; ++r) {
      if (basis_[r] < n_head_) continue;
      Eigen::RowVectorXd tableau_row = binv_.row(r) * a_;
      int entering = -1;
      for (int j = 0; j < n_head_; ++j)
        if (!is_basic_[j] && std::abs(tableau_row(j)) > kPivotTol) {
          entering = j;
          break;
        }
      if (entering < 0) continue;

      Eigen::VectorXd direction = binv_ * a_.col(entering);
      const double pivot = direction(r);
      basis_[r] = entering;
      is_basic_[entering] = true;

      Eigen::RowVectorXd pivot_row = binv_.row(r) / pivot;
      for (int i = 0; i < rows_; ++i) {
        if (i == r) continue;
        binv_.row(i) -= direction(i) * pivot_row;
      }
      binv_.row(r) = pivot_row;
      xb_(r) = 0.0;
    }
  }

  void refactor() {
    Eigen::MatrixXd basis_matrix(rows_, rows_);
    for (int r = 0; r < rows_; ++r) {
      if (basis_[r] < n_head_)
        basis_matrix.col(r) = a_.col(basis_[r]);
      else
        basis_matrix.col(r) = Eigen::VectorXd::Unit(rows_, basis_[r] - n_head_);
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis_matrix);
    binv_ = lu.inverse();
    xb_ = binv_ * b_;
    for (int r = 0; r < rows_; ++r)
      if (xb_(r) < 0.0 && xb_(r) > -kPivotTol) xb_(r) = 0.0;
  }

  int rows_ = 0;
  int n_eq_ = 0;
  int n_struct_ = 0;
  int n_head_ = 0;  // structural + surplus
  Eigen::MatrixXd a_;
  Eigen::VectorXd b_;
  Eigen::VectorXd cost_;
  Eigen::MatrixXd binv_;
  Eigen::VectorXd xb_;
  std::vector<int> basis_;       // per row: column id; >= n_head_ means artificial
  std::vector<bool> is_basic_;   // structural + surplus columns only
  std::vector<double> flip_;
};

}  // namespace

SimplexSolution solve_standard_lp(const StandardLp& lp) {
  if (lp.eq_a.rows() != lp.eq_b.size() || lp.ge_a.rows() != lp.ge_b.size())
    throw std::invalid_argument("constraint matrix/rhs size mismatch");
  if ((lp.eq_a.rows() > 0 && lp.eq_a.cols() != lp.obj.size()) ||
      (lp.ge_a.rows() > 0 && lp.ge_a.cols() != lp.obj.size()))
    throw std::invalid_argument("constraint matrix/objective size mismatch");
  RevisedSimplex solver(lp);
  return solver.run();
}

}  // namespace occulp
