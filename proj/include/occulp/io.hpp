#pragma once

#include <string>

#include <json.hpp>

#include "occulp/chattering.hpp"
#include "occulp/model.hpp"
#include "occulp/policy.hpp"

namespace occulp {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

// -inf is encoded as the string "-inf"; everything else is a JSON number.
nlohmann::json json_of_value(double x);
double value_of_json(const nlohmann::json& j);

// Model files: a single JSON document with n_states, per-state action
// arrays of {label, coord?}, sparse transition quadruplets [s, a, s', p],
// per-criterion sparse reward triplets [s, a, r], beta, mu, bounds.
nlohmann::json model_to_json(const FiniteCMDP& model);
FiniteCMDP model_from_json(const nlohmann::json& j);

FiniteCMDP load_model(const std::string& path);
void save_model(const FiniteCMDP& model, const std::string& path);

// Canonical serialization (sorted keys and triplets, two-space indent,
// trailing newline); parsing and re-serializing a canonical file is
// byte-identical.
std::string canonical_model_text(const FiniteCMDP& model);

// FNV-1a over the canonical text, as "fnv1a64:<hex>".
std::string model_hash(const FiniteCMDP& model);

// Policy files carry a "type" discriminator: "stationary" with per-state
// probability rows, or "chattering" with selectors and weight rows.
nlohmann::json policy_to_json(const RandomizedStationaryPolicy& policy);
nlohmann::json policy_to_json(const ChatteringPolicy& policy);

struct LoadedPolicy {
  bool is_chattering = false;
  RandomizedStationaryPolicy stationary;
  ChatteringPolicy chattering;
};
LoadedPolicy load_policy(const std::string& path);

// Common report envelope: schema_version, tool_version, model_hash and the
// full parameter set of the invocation.
nlohmann::json report_envelope(const FiniteCMDP& model, const nlohmann::json& parameters);

}  // namespace occulp
