#include "occulp/models.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "occulp/rng.hpp"
#include "occulp/tolerances.hpp"

namespace occulp {

namespace {

std::string format_coord(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

ActionLabel grid_action(double coord) { return ActionLabel{format_coord(coord), coord}; }

int nearest_grid_index(double x, double step, int n) {
  int idx = static_cast<int>(std::lround(x / step));
  return std::clamp(idx, 0, n - 1);
}

// Equal-probability quadrature nodes of an exponential with the given mean,
// truncated at its 1 - 1e-8 quantile (mass renormalized): inverse CDF at
// midpoints of n equal slices.
std::vector<double> exponential_nodes(double mean, int n) {
  const double p_trunc = 1.0 - 1e-8;
  std::vector<double> nodes(n);
  for (int k = 0; k < n; ++k) {
    double u = (k + 0.5) / n * p_trunc;
    nodes[k] = -mean * std::log1p(-u);
  }
  return nodes;
}

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on the
// Legendre polynomial.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = x;
    weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

std::vector<double> dirichlet_row(CounterRng& rng, int n) {
  std::vector<double> row(n);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    row[i] = rng.next_exponential(1.0);
    total += row[i];
  }
  double partial = 0.0;
  for (int i = 0; i + 1 < n; ++i) {
    row[i] /= total;
    partial += row[i];
  }
  row[n - 1] = 1.0 - partial;  // exact unit sum
  return row;
}

}  // namespace

BuiltModel example1(double c, const DiscretizationSpec& spec, double beta, double d1) {
  if (c < 1.0) throw std::invalid_argument("example1 requires c >= 1");
  if (spec.n_states < 2 || spec.s_max <= 0.0) throw std::invalid_argument("bad grid spec");

  BuiltModel out;
  FiniteCMDP& m = out.model;
  const int n = spec.n_states;
  const double step = spec.s_max / (n - 1);

  m.n_states = n;
  m.beta = beta;
  m.bounds = {d1};
  m.mu.assign(n, 0.0);
  m.mu[n - 1] = 1.0;  // start with the full resource stock

  m.actions.resize(n);
  m.transition.resize(n);
  m.rewards.assign(2, std::vector<std::vector<double>>(n));
  for (int i = 0; i < n; ++i) {
    const double s = i * step;
    const int n_act = i + 1;  // grid points in [0, s]
    m.actions[i].reserve(n_act);
    m.transition[i].resize(n_act);
    m.rewards[0][i].resize(n_act);
    m.rewards[1][i].resize(n_act);
    for (int j = 0; j < n_act; ++j) {
      const double a = j * step;
      m.actions[i].push_back(grid_action(a));
      const double successor = std::sqrt(std::max(s - a, 0.0));
      m.transition[i][j] = {{nearest_grid_index(successor, step, n), 1.0}};
      m.rewards[0][i][j] = (a == 0.0) ? kNegInf : a - 1.0 / a;
      m.rewards[1][i][j] = (s == 0.0) ? kNegInf : std::log(s);
    }
  }

  out.weight.w.resize(n);
  for (int i = 0; i < n; ++i) out.weight.w[i] = i * step + c;
  out.weight.c = c;
  out.weight.analytic_delta = 1.0 + 1.0 / (4.0 + 4.0 * c);
  return out;
}

BuiltModel example2(double c, double m_bar, const DiscretizationSpec& spec, double beta,
                    double d1) {
  if (c < 1.0) throw std::invalid_argument("example2 requires c >= 1");
  if (m_bar <= 0.0) throw std::invalid_argument("noise mean must be positive");
  if (spec.n_states < 2 || spec.s_max <= 0.0 || spec.n_quad < 1)
    throw std::invalid_argument("bad grid spec");

  BuiltModel out;
  FiniteCMDP& m = out.model;
  const int n = spec.n_states;
  const double step = spec.s_max / (n - 1);
  const std::vector<double> noise = exponential_nodes(m_bar, spec.n_quad);
  const double node_mass = 1.0 / spec.n_quad;

  m.n_states = n;
  m.beta = beta;
  m.bounds = {d1};
  m.mu.assign(n, 0.0);
  m.mu[nearest_grid_index(1.0, step, n)] = 1.0;

  m.actions.resize(n);
  m.transition.resize(n);
  m.rewards.assign(2, std::vector<std::vector<double>>(n));
  for (int i = 0; i < n; ++i) {
    const double s = i * step;
    const int n_act = i + 1;
    m.actions[i].reserve(n_act);
    m.transition[i].resize(n_act);
    m.rewards[0][i].resize(n_act);
    m.rewards[1][i].resize(n_act);
    for (int j = 0; j < n_act; ++j) {
      const double a = j * step;
      m.actions[i].push_back(grid_action(a));
      const double base = s - a + std::sqrt(std::max(s - a, 0.0));

      std::vector<double> row(n, 0.0);
      double clipped = 0.0;
      for (double xi : noise) {
        double successor = base + xi;
        if (successor > spec.s_max) {
          clipped += node_mass;
          successor = spec.s_max;
        }
        row[nearest_grid_index(successor, step, n)] += node_mass;
      }
      out.clipped_mass = std::max(out.clipped_mass, clipped);

      auto& sparse = m.transition[i][j];
      double partial = 0.0;
      int last = -1;
      for (int t = 0; t < n; ++t)
        if (row[t] > 0.0) last = t;
      for (int t = 0; t < n; ++t) {
        if (row[t] <= 0.0) continue;
        double p = (t == last) ? 1.0 - partial : row[t];
        partial += row[t];
        sparse.push_back({t, p});
      }

      m.rewards[0][i][j] = std::sqrt(a);
      m.rewards[1][i][j] = std::log(s + 1.0);
    }
  }
  if (out.clipped_mass > 1e-3) {
    std::ostringstream os;
    os << "transition mass clipped at s_max reaches " << out.clipped_mass
       << " in the worst row; consider a larger state range";
    out.warnings.push_back(os.str());
  }

  out.weight.w.resize(n);
  for (int i = 0; i < n; ++i) out.weight.w[i] = i * step + c;
  out.weight.c = c;
  out.weight.analytic_delta = 1.0 + 0.5 / (std::sqrt(m_bar * m_bar + c) - m_bar);
  return out;
}

FiniteCMDP example3(const DiscretizationSpec& spec, double beta, double d1, DensityFn density,
                    CostFn cost) {
  if (spec.n_states < 2 || spec.n_action_grid < 2 || spec.n_quad < 2)
    throw std::invalid_argument("bad grid spec");

  if (!density) {
    density = [](double t, double /*s*/, double a) {
      // Beta(1 + 2(1-a), 1 + 2a): repair intensity a = 1 piles successor
      // mass near the perfect state t = 0.
      double alpha = 1.0 + 2.0 * (1.0 - a);
      double b = 1.0 + 2.0 * a;
      return std::pow(t, alpha - 1.0) * std::pow(1.0 - t, b - 1.0) / std::beta(alpha, b);
    };
  }
  if (!cost) {
    cost = [](double /*s*/, double a) { return a + 0.5 * a * a; };
  }

  FiniteCMDP m;
  const int n = spec.n_states;
  const int n_act = spec.n_action_grid;
  const double step = 1.0 / (n - 1);
  const double action_step = 1.0 / (n_act - 1);

  std::vector<double> gl_nodes, gl_weights;
  gauss_legendre(spec.n_quad, gl_nodes, gl_weights);

  m.n_states = n;
  m.beta = beta;
  m.bounds = {-d1};  // E[sum beta^{n-1} s_n] <= d1  <=>  J_1 >= -d1 with r_1 = -s
  m.mu.assign(n, 1.0 / n);
  m.mu[n - 1] = 1.0 - (n - 1) * (1.0 / n);

  m.actions.resize(n);
  m.transition.resize(n);
  m.rewards.assign(2, std::vector<std::vector<double>>(n));
  for (int i = 0; i < n; ++i) {
    const double s = i * step;
    m.actions[i].reserve(n_act);
    m.transition[i].resize(n_act);
    m.rewards[0][i].resize(n_act);
    m.rewards[1][i].resize(n_act);
    for (int j = 0; j < n_act; ++j) {
      const double a = j * action_step;
      m.actions[i].push_back(grid_action(a));

      // Cell mass around each grid point by Gauss-Legendre quadrature. The
      // end cells substitute t = lo + (hi-lo) u^4 (mirrored at 1) so that
      // algebraic endpoint factors like the Beta kernel's t^(alpha-1) stay
      // within the 1e-8 normalization contract.
      std::vector<double> row(n, 0.0);
      double total = 0.0;
      for (int t = 0; t < n; ++t) {
        double lo = std::max(0.0, t * step - 0.5 * step);
        double hi = std::min(1.0, t * step + 0.5 * step);
        double mass = 0.0;
        if (t == 0 || t == n - 1) {
          const bool at_left = (t == 0);
          for (int k = 0; k < spec.n_quad; ++k) {
            double u = 0.5 * (gl_nodes[k] + 1.0);
            double u3 = u * u * u;
            double point = at_left ? lo + (hi - lo) * u3 * u : hi - (hi - lo) * u3 * u;
            mass += gl_weights[k] * 0.5 * density(point, s, a) * (hi - lo) * 4.0 * u3;
          }
        } else {
          double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
          for (int k = 0; k < spec.n_quad; ++k)
            mass += gl_weights[k] * half * density(mid + half * gl_nodes[k], s, a);
        }
        row[t] = mass;
        total += row[t];
      }
      if (std::abs(total - 1.0) > 1e-8) {
        std::ostringstream os;
        os << "density at (s=" << s << ", a=" << a << ") integrates to " << total;
        throw std::invalid_argument(os.str());
      }

      auto& sparse = m.transition[i][j];
      double partial = 0.0;
      int last = -1;
      for (int t = 0; t < n; ++t)
        if (row[t] > 0.0) last = t;
      for (int t = 0; t < n; ++t) {
        if (row[t] <= 0.0) continue;
        double p = (t == last) ? 1.0 - partial : row[t] / total;
        partial += row[t] / total;
        sparse.push_back({t, p});
      }

      m.rewards[0][i][j] = -cost(s, a);
      m.rewards[1][i][j] = -s;
    }
  }
  return m;
}

RandomizedStationaryPolicy Example4Model::policy(int n) const {
  DeterministicPolicy f(model.n_states, 0);
  f[state_start] = n;  // action index n is "1/n"; index 0 is the action 0
  return RandomizedStationaryPolicy::from_deterministic(model, f);
}

std::vector<RandomizedStationaryPolicy> Example4Model::policy_family() const {
  std::vector<RandomizedStationaryPolicy> family;
  const int n_trunc = model.num_actions(state_start) - 1;
  family.reserve(n_trunc);
  for (int n = 1; n <= n_trunc; ++n) family.push_back(policy(n));
  return family;
}

Example4Model example4(Example4Variant variant, int n_trunc, double beta) {
  if (n_trunc < 3) throw std::invalid_argument("example4 requires N >= 3");

  Example4Model out;
  FiniteCMDP& m = out.model;
  const int n = 3 + n_trunc;
  m.n_states = n;
  m.beta = beta;
  m.mu.assign(n, 0.0);
  m.mu[out.state_start] = 1.0;

  m.actions.resize(n);
  m.transition.resize(n);
  m.rewards.assign(1, std::vector<std::vector<double>>(n));

  // 0*: action 0 plus 1/n for n = 1..N.
  m.actions[out.state_start].push_back(grid_action(0.0));
  for (int k = 1; k <= n_trunc; ++k) m.actions[out.state_start].push_back(ActionLabel{
      "1/" + std::to_string(k), 1.0 / k});
  m.transition[out.state_start].resize(n_trunc + 1);
  m.rewards[0][out.state_start].assign(n_trunc + 1, 0.0);
  m.transition[out.state_start][0] = {{out.state_zero, 1.0}};
  for (int k = 1; k <= n_trunc; ++k) {
    double q = (variant == Example4Variant::I) ? 1.0 / k : std::pow(0.5, k);
    m.transition[out.state_start][k] = {{out.state_zero, 1.0 - q},
                                        {out.first_numbered + k - 1, q}};
  }

  // Every other state has the single action a0 and moves to 0**.
  for (int s = 1; s < n; ++s) {
    m.actions[s].push_back(ActionLabel{"a0", std::nullopt});
    m.transition[s] = {{{out.state_absorb, 1.0}}};
  }
  m.rewards[0][out.state_zero] = {1.0};
  m.rewards[0][out.state_absorb] = {0.0};
  for (int k = 1; k <= n_trunc; ++k)
    m.rewards[0][out.first_numbered + k - 1] = {static_cast<double>(k)};

  out.weight.w.assign(n, 1.0);
  for (int k = 1; k <= n_trunc; ++k)
    out.weight.w[out.first_numbered + k - 1] = static_cast<double>(k);
  return out;
}

FiniteCMDP random_cmdp(std::uint64_t seed, int n_states, int n_actions, int m,
                       std::pair<double, double> reward_range, double feasibility_margin) {
  if (n_states < 1 || n_actions < 1 || m < 0) throw std::invalid_argument("bad instance shape");

  CounterRng rng(seed, /*stream=*/0);
  FiniteCMDP model;
  model.n_states = n_states;
  model.beta = 0.7 + 0.25 * rng.next_uniform();
  model.mu.assign(n_states, 1.0 / n_states);
  model.mu[n_states - 1] = 1.0 - (n_states - 1) * (1.0 / n_states);

  model.actions.resize(n_states);
  model.transition.resize(n_states);
  model.rewards.assign(m + 1, std::vector<std::vector<double>>(n_states));
  for (int s = 0; s < n_states; ++s) {
    for (int a = 0; a < n_actions; ++a) model.actions[s].push_back(grid_action(a));
    model.transition[s].resize(n_actions);
    for (int a = 0; a < n_actions; ++a) {
      auto row = dirichlet_row(rng, n_states);
      for (int t = 0; t < n_states; ++t) model.transition[s][a].push_back({t, row[t]});
    }
    for (int i = 0; i <= m; ++i) {
      model.rewards[i][s].resize(n_actions);
      for (int a = 0; a < n_actions; ++a)
        model.rewards[i][s][a] = rng.next_uniform(reward_range.first, reward_range.second);
    }
  }

  if (m > 0) {
    DeterministicPolicy f(n_states);
    for (int s = 0; s < n_states; ++s) f[s] = rng.next_index(n_actions);
    PerformanceVector v = evaluate_stationary(
        model, RandomizedStationaryPolicy::from_deterministic(model, f));
    model.bounds.resize(m);
    for (int i = 0; i < m; ++i) model.bounds[i] = v[i + 1] - feasibility_margin;
  }
  return model;
}

RandomizedStationaryPolicy random_policy(const FiniteCMDP& model, std::uint64_t seed) {
  CounterRng rng(seed, /*stream=*/1);
  RandomizedStationaryPolicy phi;
  phi.probs.resize(model.n_states);
  for (int s = 0; s < model.n_states; ++s) phi.probs[s] = dirichlet_row(rng, model.num_actions(s));
  return phi;
}

}  // namespace occulp
