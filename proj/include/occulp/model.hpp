#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace occulp {

// Rewards live in R ∪ {-inf}; -inf is an explicit sentinel (never a large
// negative float) and all arithmetic on it is short-circuited by the
// evaluation routines.
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline bool is_neg_inf(double x) { return std::isinf(x) && x < 0.0; }

// Action identifier. The label is opaque to the solver; the optional
// coordinate lets discretized models report policies in original units.
struct ActionLabel {
  std::string name;
  std::optional<double> coord;
};

// One entry of a sparse transition row.
struct Transition {
  int next = 0;
  double prob = 0.0;
};

// A finite constrained MDP: states 0..n_states-1, per-state action sets,
// transition kernel on feasible pairs, m+1 reward tables (index 0 is the
// maximized criterion, 1..m are constraint sources with levels bounds[i-1]),
// discount factor in (0,1) and an initial distribution.
struct FiniteCMDP {
  int n_states = 0;
  std::vector<std::vector<ActionLabel>> actions;                 // A(s)
  std::vector<std::vector<std::vector<Transition>>> transition;  // [s][a] -> row
  std::vector<std::vector<std::vector<double>>> rewards;         // [i][s][a]
  double beta = 0.0;
  std::vector<double> mu;
  std::vector<double> bounds;  // d_1..d_m

  int num_constraints() const { return static_cast<int>(bounds.size()); }
  int num_criteria() const { return static_cast<int>(rewards.size()); }
  int num_actions(int s) const { return static_cast<int>(actions[s].size()); }
  int num_pairs() const {
    int k = 0;
    for (const auto& a : actions) k += static_cast<int>(a.size());
    return k;
  }
};

// (J_0, ..., J_m); entries may be -inf.
struct PerformanceVector {
  std::vector<double> values;

  PerformanceVector() = default;
  explicit PerformanceVector(std::vector<double> v) : values(std::move(v)) {}

  double operator[](int i) const { return values[static_cast<std::size_t>(i)]; }
  int size() const { return static_cast<int>(values.size()); }
  bool all_finite() const {
    for (double v : values)
      if (!std::isfinite(v)) return false;
    return true;
  }
};

enum class Severity { Error, Warning };

struct ValidationRecord {
  Severity severity = Severity::Error;
  std::string location;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationRecord> records;

  bool ok() const {
    for (const auto& r : records)
      if (r.severity == Severity::Error) return false;
    return true;
  }
  std::string to_string() const;
};

// Pure structural check; an empty record list is equivalent to the model
// satisfying every FiniteCMDP invariant.
ValidationReport validate_model(const FiniteCMDP& model);

// Throws std::invalid_argument with the report text if validation fails.
void require_valid(const FiniteCMDP& model);

}  // namespace occulp
