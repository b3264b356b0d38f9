#include "occulp/policy.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "occulp/tolerances.hpp"

namespace occulp {

namespace {

void check_policy_shape(const FiniteCMDP& model, const RandomizedStationaryPolicy& phi) {
  if (static_cast<int>(phi.probs.size()) != model.n_states)
    throw std::invalid_argument("policy has wrong number of states");
  for (int s = 0; s < model.n_states; ++s) {
    if (phi.probs[s].size() != model.actions[s].size())
      throw std::invalid_argument("policy row does not match A(s) at state " + std::to_string(s));
    double total = 0.0;
    for (double p : phi.probs[s]) {
      if (p < -kStructuralTol)
        throw std::invalid_argument("negative action probability at state " + std::to_string(s));
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-9)
      throw std::invalid_argument("policy row does not sum to 1 at state " + std::to_string(s));
  }
}

void check_occupancy_shape(const FiniteCMDP& model, const OccupancyMeasure& Q) {
  if (static_cast<int>(Q.q.size()) != model.n_states)
    throw std::invalid_argument("occupancy has wrong number of states");
  for (int s = 0; s < model.n_states; ++s)
    if (Q.q[s].size() != model.actions[s].size())
      throw std::invalid_argument("occupancy row does not match A(s) at state " +
                                  std::to_string(s));
}

}  // namespace

RandomizedStationaryPolicy RandomizedStationaryPolicy::from_deterministic(
    const FiniteCMDP& model, const DeterministicPolicy& f) {
  RandomizedStationaryPolicy phi;
  phi.probs.resize(model.n_states);
  for (int s = 0; s < model.n_states; ++s) {
    phi.probs[s].assign(model.actions[s].size(), 0.0);
    phi.probs[s].at(static_cast<std::size_t>(f.at(s))) = 1.0;
  }
  return phi;
}

bool RandomizedStationaryPolicy::is_deterministic(double tol) const {
  for (const auto& row : probs)
    for (double p : row)
      if (p > tol && p < 1.0 - tol) return false;
  return true;
}

double OccupancyMeasure::total_mass() const {
  double total = 0.0;
  for (const auto& row : q)
    for (double v : row) total += v;
  return total;
}

std::vector<double> OccupancyMeasure::state_marginal() const {
  std::vector<double> marginal(q.size(), 0.0);
  for (std::size_t s = 0; s < q.size(); ++s)
    for (double v : q[s]) marginal[s] += v;
  return marginal;
}

double flow_residual(const FiniteCMDP& model, const OccupancyMeasure& Q) {
  std::vector<double> inflow(model.n_states, 0.0);
  for (int s = 0; s < model.n_states; ++s)
    for (int a = 0; a < model.num_actions(s); ++a)
      for (const auto& t : model.transition[s][a]) inflow[t.next] += t.prob * Q.q[s][a];

  double worst = 0.0;
  auto marginal = Q.state_marginal();
  for (int s = 0; s < model.n_states; ++s) {
    double residual = marginal[s] - model.beta * inflow[s] - model.mu[s];
    worst = std::max(worst, std::abs(residual));
  }
  return worst;
}

OccupancyMeasure occupancy_of_stationary(const FiniteCMDP& model,
                                         const RandomizedStationaryPolicy& phi) {
  check_policy_shape(model, phi);
  const int n = model.n_states;

  // (I - beta * P_phi^T) q = mu
  Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n);
  for (int s = 0; s < n; ++s)
    for (int a = 0; a < model.num_actions(s); ++a) {
      double weight = phi.probs[s][a];
      if (weight == 0.0) continue;
      for (const auto& t : model.transition[s][a])
        system(t.next, s) -= model.beta * t.prob * weight;
    }

  Eigen::VectorXd mu(n);
  for (int s = 0; s < n; ++s) mu(s) = model.mu[s];

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
  Eigen::VectorXd marginal = lu.solve(mu);

  double residual = (system * marginal - mu).cwiseAbs().maxCoeff();
  if (residual > 1e-10) {
    std::ostringstream os;
    os << "occupancy system residual " << residual << " exceeds 1e-10";
    throw std::runtime_error(os.str());
  }

  OccupancyMeasure Q;
  Q.q.resize(n);
  for (int s = 0; s < n; ++s) {
    double qs = std::max(marginal(s), 0.0);  // clamp LU round-off
    Q.q[s].resize(model.actions[s].size());
    for (int a = 0; a < model.num_actions(s); ++a) Q.q[s][a] = qs * phi.probs[s][a];
  }
  return Q;
}

PerformanceVector evaluate_from_occupancy(const FiniteCMDP& model, const OccupancyMeasure& Q) {
  check_occupancy_shape(model, Q);

  PerformanceVector result;
  result.values.resize(model.num_criteria());
  for (int i = 0; i < model.num_criteria(); ++i) {
    bool hit_sentinel = false;
    for (int s = 0; s < model.n_states && !hit_sentinel; ++s)
      for (int a = 0; a < model.num_actions(s); ++a)
        if (is_neg_inf(model.rewards[i][s][a]) && Q.q[s][a] > kStructuralTol) {
          hit_sentinel = true;
          break;
        }
    if (hit_sentinel) {
      result.values[i] = kNegInf;
      continue;
    }
    double total = 0.0;
    for (int s = 0; s < model.n_states; ++s)
      for (int a = 0; a < model.num_actions(s); ++a) {
        if (Q.q[s][a] == 0.0 || is_neg_inf(model.rewards[i][s][a])) continue;
        total += model.rewards[i][s][a] * Q.q[s][a];
      }
    result.values[i] = total;
  }
  return result;
}

PerformanceVector evaluate_stationary(const FiniteCMDP& model,
                                      const RandomizedStationaryPolicy& phi) {
  return evaluate_from_occupancy(model, occupancy_of_stationary(model, phi));
}

RandomizedStationaryPolicy extract_policy(const FiniteCMDP& model, const OccupancyMeasure& Q) {
  check_occupancy_shape(model, Q);

  RandomizedStationaryPolicy phi;
  phi.probs.resize(model.n_states);
  auto marginal = Q.state_marginal();
  for (int s = 0; s < model.n_states; ++s) {
    phi.probs[s].assign(model.actions[s].size(), 0.0);
    if (marginal[s] > 0.0) {
      for (int a = 0; a < model.num_actions(s); ++a)
        phi.probs[s][a] = std::max(Q.q[s][a], 0.0) / marginal[s];
      // renormalize away division round-off
      double total = 0.0;
      for (double p : phi.probs[s]) total += p;
      for (double& p : phi.probs[s]) p /= total;
    } else {
      phi.probs[s][0] = 1.0;
    }
  }
  return phi;
}

}  // namespace occulp
