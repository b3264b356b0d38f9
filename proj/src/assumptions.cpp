#include "occulp/assumptions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "occulp/tolerances.hpp"

namespace occulp {

namespace {

void check_weight(const FiniteCMDP& model, const WeightSpec& w) {
  if (static_cast<int>(w.w.size()) != model.n_states)
    throw std::invalid_argument("weight function has wrong length");
  for (double v : w.w)
    if (!(v >= 1.0)) throw std::invalid_argument("weight function must satisfy w(s) >= 1");
}

}  // namespace

BoundCheck check_bound(const FiniteCMDP& model, const WeightSpec& w, bool two_sided) {
  check_weight(model, w);
  BoundCheck result;
  result.holds = true;
  result.worst_margin = -std::numeric_limits<double>::infinity();

  for (int i = 0; i < model.num_criteria(); ++i)
    for (int s = 0; s < model.n_states; ++s)
      for (int a = 0; a < model.num_actions(s); ++a) {
        double r = model.rewards[i][s][a];
        double magnitude;
        if (is_neg_inf(r)) {
          if (!two_sided) continue;  // (A1) holds vacuously at -inf
          magnitude = std::numeric_limits<double>::infinity();
        } else {
          magnitude = two_sided ? std::abs(r) : r;
        }
        double margin = magnitude - w.w[s];
        if (margin > result.worst_margin) {
          result.worst_margin = margin;
          result.worst_state = s;
          result.worst_action = a;
          result.worst_criterion = i;
        }
        if (margin > 0.0) result.holds = false;
      }
  return result;
}

double compute_delta(const FiniteCMDP& model, const WeightSpec& w) {
  check_weight(model, w);
  double delta = 0.0;
  for (int s = 0; s < model.n_states; ++s)
    for (int a = 0; a < model.num_actions(s); ++a) {
      double expectation = 0.0;
      for (const auto& t : model.transition[s][a]) expectation += w.w[t.next] * t.prob;
      delta = std::max(delta, expectation / w.w[s]);
    }
  return delta;
}

std::vector<double> apply_M(const FiniteCMDP& model, const std::vector<double>& v) {
  if (static_cast<int>(v.size()) != model.n_states)
    throw std::invalid_argument("apply_M: vector has wrong length");
  std::vector<double> out(v.size());
  for (int s = 0; s < model.n_states; ++s) {
    double best = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < model.num_actions(s); ++a) {
      double expectation = 0.0;
      for (const auto& t : model.transition[s][a]) expectation += v[t.next] * t.prob;
      best = std::max(best, expectation);
    }
    out[s] = best;
  }
  return out;
}

TailReport check_tail_a12(const FiniteCMDP& model, const WeightSpec& w, int n_max) {
  check_weight(model, w);
  if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");

  TailReport report;
  report.delta = compute_delta(model, w);
  report.beta_delta = model.beta * report.delta;
  if (report.beta_delta >= 1.0) {
    report.conclusive = false;  // cannot close the tail; never certify
    return report;
  }
  report.conclusive = true;

  // m_k = <mu, M^{k-1} w> realizes sup_pi E[w(s_k)] exactly on finite models.
  std::vector<double> iterate_mass(n_max);
  std::vector<double> v = w.w;
  double mu_w = 0.0;
  for (int s = 0; s < model.n_states; ++s) mu_w += model.mu[s] * v[s];
  iterate_mass[0] = mu_w;
  for (int k = 1; k < n_max; ++k) {
    v = apply_M(model, v);
    double mass = 0.0;
    for (int s = 0; s < model.n_states; ++s) mass += model.mu[s] * v[s];
    iterate_mass[k] = mass;
  }

  // bounds[n-1] = sum_{k=n}^{n_max} beta^{k-1} m_k + tail, with the tail
  // closed geometrically from the last computed iterate:
  // sum_{k>n_max} beta^{k-1} m_k <= beta^{n_max} delta m_{n_max} / (1 - beta delta).
  report.bounds.assign(n_max, 0.0);
  double beta_pow = std::pow(model.beta, n_max);
  double accumulator =
      beta_pow * report.delta * iterate_mass[n_max - 1] / (1.0 - report.beta_delta);
  for (int k = n_max; k >= 1; --k) {
    beta_pow /= model.beta;  // beta^{k-1}
    accumulator += beta_pow * iterate_mass[k - 1];
    report.bounds[k - 1] = accumulator;
  }
  report.verified = report.bounds[n_max - 1] < 1e-6 * mu_w;
  return report;
}

std::vector<double> check_ui_a21(const FiniteCMDP& model,
                                 const std::vector<RandomizedStationaryPolicy>& family,
                                 const WeightSpec& w, const std::vector<double>& l_grid, int n) {
  check_weight(model, w);
  if (n < 1) throw std::invalid_argument("step index n must be >= 1");

  std::vector<double> profile(l_grid.size(), 0.0);
  for (const auto& phi : family) {
    // State distribution of s_n under phi (s_1 ~ mu).
    std::vector<double> dist = model.mu;
    for (int step = 1; step < n; ++step) {
      std::vector<double> next(model.n_states, 0.0);
      for (int s = 0; s < model.n_states; ++s) {
        if (dist[s] == 0.0) continue;
        for (int a = 0; a < model.num_actions(s); ++a) {
          double weight = dist[s] * phi.probs[s][a];
          if (weight == 0.0) continue;
          for (const auto& t : model.transition[s][a]) next[t.next] += weight * t.prob;
        }
      }
      dist.swap(next);
    }
    for (std::size_t li = 0; li < l_grid.size(); ++li) {
      double expectation = 0.0;
      for (int s = 0; s < model.n_states; ++s)
        if (w.w[s] >= l_grid[li]) expectation += dist[s] * w.w[s];
      profile[li] = std::max(profile[li], expectation);
    }
  }
  return profile;
}

LayerReport check_a4(const FiniteCMDP& model, const std::vector<int>& layer_of_state,
                     const WeightSpec& w, double beta) {
  check_weight(model, w);
  if (static_cast<int>(layer_of_state.size()) != model.n_states)
    throw std::invalid_argument("layer assignment must cover every state");
  int max_layer = 0;
  for (int layer : layer_of_state) {
    if (layer < 1) throw std::invalid_argument("layer indices are 1-based");
    max_layer = std::max(max_layer, layer);
  }

  LayerReport report;

  // X_{k+1} contains exactly the states with layer <= k+1.
  report.layer_forward_ok = true;
  for (int s = 0; s < model.n_states && report.layer_forward_ok; ++s)
    for (int a = 0; a < model.num_actions(s) && report.layer_forward_ok; ++a)
      for (const auto& t : model.transition[s][a])
        if (t.prob > 0.0 && layer_of_state[t.next] > layer_of_state[s] + 1) {
          report.layer_forward_ok = false;
          break;
        }

  // m_k = sup over X_k of w; nondecreasing because the layers are nested.
  std::vector<double> layer_max(max_layer + 1, 0.0);
  for (int s = 0; s < model.n_states; ++s)
    layer_max[layer_of_state[s]] = std::max(layer_max[layer_of_state[s]], w.w[s]);
  std::vector<double> m(max_layer + 1, 0.0);
  double running = 0.0;
  for (int k = 1; k <= max_layer; ++k) {
    running = std::max(running, layer_max[k]);
    m[k] = running;
  }

  // Growth ratio of the last observed layer, clipped to >= 1 (m is
  // nondecreasing; a single layer gives ratio 1).
  double ratio = 1.0;
  if (max_layer >= 2 && m[max_layer - 1] > 0.0)
    ratio = std::max(1.0, m[max_layer] / m[max_layer - 1]);
  report.growth_ratio = ratio;
  report.summable = beta * ratio < 1.0;

  if (report.summable) {
    // Accumulate the series with m_k extrapolated as m_L * ratio^(k-L),
    // stopping once the geometric tail bound drops below 1e-9.
    double sum = 0.0;
    double beta_pow = 1.0;  // beta^{k-1}
    double mk = 0.0;
    long k = 1;
    const long cap = 1000000;
    for (; k <= cap; ++k) {
      mk = (k <= max_layer) ? m[k] : mk * ratio;
      double term = mk * beta_pow;
      sum += term;
      report.last_term = term;
      if (k >= max_layer) {
        double tail_bound = term * (beta * ratio) / (1.0 - beta * ratio);
        if (tail_bound < 1e-9) break;
      }
      beta_pow *= beta;
    }
    report.partial_sum = sum;
    report.note = "series extended beyond the observed layers at the clipped growth ratio";
  } else {
    report.note = "beta * growth_ratio >= 1: extrapolated terms do not vanish";
  }

  report.holds = report.layer_forward_ok && report.summable;
  return report;
}

AssumptionReport run_assumption_suite(const FiniteCMDP& model, const WeightSpec& w, int n_max,
                                      const std::vector<RandomizedStationaryPolicy>* family,
                                      std::vector<double> ui_levels) {
  AssumptionReport report;
  report.a1 = check_bound(model, w, /*two_sided=*/false);
  report.a1_prime = check_bound(model, w, /*two_sided=*/true);
  report.delta = compute_delta(model, w);
  report.beta_delta = model.beta * report.delta;
  report.tail = check_tail_a12(model, w, n_max);
  if (family != nullptr && !family->empty()) {
    if (ui_levels.empty()) {
      double top = 1.0;
      for (double v : w.w) top = std::max(top, v);
      for (double level = 2.0; level <= top + 1.0; level += 1.0) ui_levels.push_back(level);
    }
    report.ui_profile = check_ui_a21(model, *family, w, ui_levels, /*n=*/2);
    report.ui_levels = std::move(ui_levels);
  }
  return report;
}

}  // namespace occulp
