#pragma once

#include <optional>
#include <string>
#include <vector>

#include "occulp/model.hpp"
#include "occulp/policy.hpp"

namespace occulp {

// Per-state weight function w >= 1 dominating the rewards, with the
// analytic parameters the example builders know about.
struct WeightSpec {
  std::vector<double> w;
  std::optional<double> c;               // weight offset used by the growth models
  std::optional<double> analytic_delta;  // closed-form drift bound when one is known
};

struct BoundCheck {
  bool holds = false;
  int worst_state = -1;
  int worst_action = -1;
  int worst_criterion = -1;
  double worst_margin = 0.0;  // max over pairs of the violated quantity minus w(s)
};

// (A1): r_i(s,a) <= w(s) for all feasible pairs and criteria; -inf rewards
// satisfy it vacuously. With two_sided set, checks (A1'): |r_i| <= w, which
// -inf rewards violate.
BoundCheck check_bound(const FiniteCMDP& model, const WeightSpec& w, bool two_sided);

// Tightest delta with sum_t w(t) p(t|s,a) <= delta * w(s) over all pairs.
double compute_delta(const FiniteCMDP& model, const WeightSpec& w);

// (Mv)(s) = max_{a in A(s)} sum_t v(t) p(t|s,a); monotone and positively
// homogeneous.
std::vector<double> apply_M(const FiniteCMDP& model, const std::vector<double>& v);

struct TailReport {
  bool conclusive = false;  // beta * delta < 1, so the geometric closure applies
  bool verified = false;    // bound at n_max is below 1e-6 * <mu, w>
  double delta = 0.0;
  double beta_delta = 0.0;
  std::vector<double> bounds;  // bounds[n-1] >= sup_pi E[sum_{k>=n} beta^{k-1} w(s_k)]
};

// Tail condition (a12): bounds the policy supremum through M-iterates,
// closing the infinite tail geometrically from the last iterate. Reports
// `inconclusive` (conclusive = false) when beta*delta >= 1.
TailReport check_tail_a12(const FiniteCMDP& model, const WeightSpec& w, int n_max);

// Uniform-integrability profile (a21) over a declared finite policy family:
// for each level l, sup over the family of E[w(s_n) 1{w(s_n) >= l}]. The
// supremum is over the family only, which is the scope the counterexample
// families need.
std::vector<double> check_ui_a21(const FiniteCMDP& model,
                                 const std::vector<RandomizedStationaryPolicy>& family,
                                 const WeightSpec& w, const std::vector<double>& l_grid, int n);

struct LayerReport {
  bool holds = false;
  bool layer_forward_ok = false;  // every transition from X_k lands in X_{k+1}
  bool summable = false;          // extrapolated series converges (beta * growth < 1)
  double partial_sum = 0.0;       // estimate of sum_k m_k beta^{k-1}
  double last_term = 0.0;
  double growth_ratio = 1.0;      // m_L / m_{L-1}, clipped to >= 1
  std::string note;
};

// (A4) for a layered model: layer_of_state[s] is the 1-based index of the
// first layer containing s (the layers X_k = {s : layer(s) <= k} are
// nested). Summability is judged by extrapolating the last observed layer
// growth ratio; the series is accumulated until its geometric tail bound
// falls below 1e-9.
LayerReport check_a4(const FiniteCMDP& model, const std::vector<int>& layer_of_state,
                     const WeightSpec& w, double beta);

struct AssumptionReport {
  BoundCheck a1;
  BoundCheck a1_prime;
  double delta = 0.0;
  double beta_delta = 0.0;
  TailReport tail;
  std::optional<std::vector<double>> ui_profile;  // only when a family was declared
  std::vector<double> ui_levels;
};

// When a policy family is supplied, the report also carries the
// uniform-integrability profile at step n = 2 over the given levels.
AssumptionReport run_assumption_suite(const FiniteCMDP& model, const WeightSpec& w,
                                      int n_max = 200,
                                      const std::vector<RandomizedStationaryPolicy>* family =
                                          nullptr,
                                      std::vector<double> ui_levels = {});

}  // namespace occulp
