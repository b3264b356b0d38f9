#include "occulp/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "occulp/tolerances.hpp"

namespace occulp {

namespace {

std::string pair_loc(int s, int a) {
  std::ostringstream os;
  os << "state " << s << ", action " << a;
  return os.str();
}

}  // namespace

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (const auto& r : records) {
    os << (r.severity == Severity::Error ? "error" : "warning") << " [" << r.location
       << "]: " << r.message << "\n";
  }
  return os.str();
}

ValidationReport validate_model(const FiniteCMDP& model) {
  ValidationReport report;
  auto error = [&](const std::string& loc, const std::string& msg) {
    report.records.push_back({Severity::Error, loc, msg});
  };

  if (model.n_states <= 0) {
    error("model", "n_states must be positive");
    return report;
  }
  if (static_cast<int>(model.actions.size()) != model.n_states) {
    error("actions", "expected one action set per state");
    return report;
  }
  for (int s = 0; s < model.n_states; ++s) {
    if (model.actions[s].empty()) error("state " + std::to_string(s), "A(s) is empty");
  }

  if (!(model.beta > 0.0 && model.beta < 1.0)) {
    std::ostringstream os;
    os << "discount factor beta = " << model.beta << " is outside (0,1)";
    error("beta", os.str());
  }

  if (static_cast<int>(model.mu.size()) != model.n_states) {
    error("mu", "initial distribution has wrong length");
  } else {
    double total = 0.0;
    for (int s = 0; s < model.n_states; ++s) {
      if (model.mu[s] < 0.0) error("mu", "negative mass at state " + std::to_string(s));
      total += model.mu[s];
    }
    if (std::abs(total - 1.0) > kStructuralTol) {
      std::ostringstream os;
      os << "initial distribution sums to " << total;
      error("mu", os.str());
    }
  }

  if (static_cast<int>(model.transition.size()) != model.n_states) {
    error("transition", "expected one row set per state");
    return report;
  }
  for (int s = 0; s < model.n_states; ++s) {
    if (model.transition[s].size() != model.actions[s].size()) {
      error("state " + std::to_string(s), "transition rows do not match A(s)");
      continue;
    }
    for (int a = 0; a < model.num_actions(s); ++a) {
      double total = 0.0;
      for (const auto& t : model.transition[s][a]) {
        if (t.next < 0 || t.next >= model.n_states) {
          error(pair_loc(s, a), "successor index out of range");
          continue;
        }
        if (t.prob < 0.0) error(pair_loc(s, a), "negative transition probability");
        total += t.prob;
      }
      if (std::abs(total - 1.0) > kStructuralTol) {
        std::ostringstream os;
        os << "transition row sums to " << total;
        error(pair_loc(s, a), os.str());
      }
    }
  }

  if (model.rewards.empty()) {
    error("rewards", "at least the r_0 table is required");
  }
  if (!model.rewards.empty() &&
      static_cast<int>(model.bounds.size()) != static_cast<int>(model.rewards.size()) - 1) {
    error("bounds", "expected one constraint level per reward table r_1..r_m");
  }
  for (int i = 0; i < model.num_criteria(); ++i) {
    const auto& table = model.rewards[i];
    if (static_cast<int>(table.size()) != model.n_states) {
      error("rewards[" + std::to_string(i) + "]", "wrong number of states");
      continue;
    }
    for (int s = 0; s < model.n_states; ++s) {
      if (table[s].size() != model.actions[s].size()) {
        error("rewards[" + std::to_string(i) + "], state " + std::to_string(s),
              "row does not match A(s)");
        continue;
      }
      for (int a = 0; a < model.num_actions(s); ++a) {
        double r = table[s][a];
        if (std::isnan(r) || (std::isinf(r) && r > 0.0)) {
          error("rewards[" + std::to_string(i) + "], " + pair_loc(s, a),
                "reward must be finite or -inf");
        }
      }
    }
  }
  for (double d : model.bounds) {
    if (!std::isfinite(d)) error("bounds", "constraint levels must be finite");
  }

  return report;
}

void require_valid(const FiniteCMDP& model) {
  ValidationReport report = validate_model(model);
  if (!report.ok()) throw std::invalid_argument("invalid model:\n" + report.to_string());
}

}  // namespace occulp
