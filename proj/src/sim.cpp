#include "occulp/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

#include "occulp/rng.hpp"
#include "occulp/tolerances.hpp"

namespace occulp {

namespace {

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("OCCULP_THREADS")) {
    int value = std::atoi(env);
    if (value > 0) return value;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

long pick_horizon(const FiniteCMDP& model, double epsilon) {
  double max_abs = 0.0;
  for (const auto& table : model.rewards)
    for (const auto& row : table)
      for (double r : row)
        if (std::isfinite(r)) max_abs = std::max(max_abs, std::abs(r));
  if (max_abs == 0.0) return 1;

  // smallest T with beta^T * max|r| / (1 - beta) < epsilon
  double bound = max_abs / (1.0 - model.beta);
  long horizon = 1;
  while (bound * std::pow(model.beta, horizon) >= epsilon && horizon < 1000000) ++horizon;
  return horizon;
}

int sample_sparse(CounterRng& rng, const std::vector<Transition>& row) {
  double u = rng.next_uniform();
  double acc = 0.0;
  int last = row.front().next;
  for (const auto& t : row) {
    if (t.prob > 0.0) last = t.next;
    acc += t.prob;
    if (u < acc) return t.next;
  }
  return last;
}

// Draws the action for one visit; chattering policies first draw a selector.
struct ActionSampler {
  const RandomizedStationaryPolicy* stationary = nullptr;
  const ChatteringPolicy* chattering = nullptr;

  int operator()(CounterRng& rng, int s) const {
    if (stationary != nullptr) return rng.next_discrete(stationary->probs[s]);
    int j = rng.next_discrete(chattering->weights[s]);
    return chattering->selectors[j][s];
  }
};

SimulationResult run(const FiniteCMDP& model, const ActionSampler& sampler,
                     const SimulationOptions& options) {
  if (options.episodes < 1) throw std::invalid_argument("episodes must be >= 1");
  if (!(options.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");

  const long horizon = pick_horizon(model, options.epsilon);
  const int n_criteria = model.num_criteria();
  const long episodes = options.episodes;

  // Per-episode returns, filled independently and reduced in episode order
  // so the estimate does not depend on the thread schedule.
  std::vector<double> returns(static_cast<std::size_t>(episodes) * n_criteria);

  auto worker = [&](long begin, long end) {
    for (long e = begin; e < end; ++e) {
      CounterRng rng(options.seed, static_cast<std::uint64_t>(e));
      double* out = &returns[static_cast<std::size_t>(e) * n_criteria];
      for (int i = 0; i < n_criteria; ++i) out[i] = 0.0;

      int s = rng.next_discrete(model.mu);
      double discount = 1.0;
      for (long t = 0; t < horizon; ++t) {
        int a = sampler(rng, s);
        for (int i = 0; i < n_criteria; ++i) {
          double r = model.rewards[i][s][a];
          if (is_neg_inf(r))
            out[i] = kNegInf;
          else if (!is_neg_inf(out[i]))
            out[i] += discount * r;
        }
        discount *= model.beta;
        s = sample_sparse(rng, model.transition[s][a]);
      }
    }
  };

  const int n_threads = std::min<long>(resolve_threads(options.threads), episodes);
  if (n_threads <= 1) {
    worker(0, episodes);
  } else {
    std::vector<std::thread> pool;
    long chunk = (episodes + n_threads - 1) / n_threads;
    for (int k = 0; k < n_threads; ++k) {
      long begin = k * chunk;
      long end = std::min(episodes, begin + chunk);
      if (begin < end) pool.emplace_back(worker, begin, end);
    }
    for (auto& t : pool) t.join();
  }

  SimulationResult result;
  result.horizon = horizon;
  result.episodes = episodes;
  result.estimates.assign(n_criteria, 0.0);
  result.std_errors.assign(n_criteria, 0.0);
  result.neg_inf_episodes.assign(n_criteria, 0);

  for (int i = 0; i < n_criteria; ++i) {
    long bad = 0;
    double sum = 0.0;
    for (long e = 0; e < episodes; ++e) {
      double v = returns[static_cast<std::size_t>(e) * n_criteria + i];
      if (is_neg_inf(v))
        ++bad;
      else
        sum += v;
    }
    result.neg_inf_episodes[i] = bad;
    if (bad > 0) {
      result.estimates[i] = kNegInf;
      result.std_errors[i] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    double mean = sum / episodes;
    double sq = 0.0;
    for (long e = 0; e < episodes; ++e) {
      double d = returns[static_cast<std::size_t>(e) * n_criteria + i] - mean;
      sq += d * d;
    }
    result.estimates[i] = mean;
    result.std_errors[i] =
        episodes > 1 ? std::sqrt(sq / (episodes - 1) / episodes) : 0.0;
  }
  return result;
}

}  // namespace

SimulationResult simulate(const FiniteCMDP& model, const RandomizedStationaryPolicy& policy,
                          const SimulationOptions& options) {
  ActionSampler sampler;
  sampler.stationary = &policy;
  return run(model, sampler, options);
}

SimulationResult simulate(const FiniteCMDP& model, const ChatteringPolicy& policy,
                          const SimulationOptions& options) {
  ActionSampler sampler;
  sampler.chattering = &policy;
  return run(model, sampler, options);
}

}  // namespace occulp
