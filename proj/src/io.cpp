#include "occulp/io.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace occulp {

using nlohmann::json;

json json_of_value(double x) {
  if (is_neg_inf(x)) return json("-inf");
  return json(x);
}

double value_of_json(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "-inf") return kNegInf;
    throw std::invalid_argument("unrecognized value string: " + j.get<std::string>());
  }
  return j.get<double>();
}

json model_to_json(const FiniteCMDP& model) {
  json j;
  j["n_states"] = model.n_states;
  j["beta"] = model.beta;
  j["mu"] = model.mu;
  j["bounds"] = model.bounds;

  json actions = json::array();
  for (const auto& per_state : model.actions) {
    json row = json::array();
    for (const auto& label : per_state) {
      json a;
      a["label"] = label.name;
      if (label.coord) a["coord"] = *label.coord;
      row.push_back(std::move(a));
    }
    actions.push_back(std::move(row));
  }
  j["actions"] = std::move(actions);

  json transition = json::array();
  for (int s = 0; s < model.n_states; ++s)
    for (int a = 0; a < model.num_actions(s); ++a)
      for (const auto& t : model.transition[s][a])
        transition.push_back(json::array({s, a, t.next, t.prob}));
  j["transition"] = std::move(transition);

  json rewards = json::array();
  for (const auto& table : model.rewards) {
    json entries = json::array();
    for (int s = 0; s < model.n_states; ++s)
      for (int a = 0; a < static_cast<int>(table[s].size()); ++a)
        entries.push_back(json::array({s, a, json_of_value(table[s][a])}));
    rewards.push_back(std::move(entries));
  }
  j["rewards"] = std::move(rewards);
  return j;
}

FiniteCMDP model_from_json(const json& j) {
  FiniteCMDP model;
  model.n_states = j.at("n_states").get<int>();
  model.beta = j.at("beta").get<double>();
  model.mu = j.at("mu").get<std::vector<double>>();
  model.bounds = j.at("bounds").get<std::vector<double>>();
  if (model.n_states <= 0) throw std::invalid_argument("n_states must be positive");

  const json& actions = j.at("actions");
  if (static_cast<int>(actions.size()) != model.n_states)
    throw std::invalid_argument("actions array does not match n_states");
  model.actions.resize(model.n_states);
  for (int s = 0; s < model.n_states; ++s)
    for (const auto& a : actions[s]) {
      ActionLabel label;
      label.name = a.at("label").get<std::string>();
      if (a.contains("coord")) label.coord = a.at("coord").get<double>();
      model.actions[s].push_back(std::move(label));
    }

  model.transition.resize(model.n_states);
  for (int s = 0; s < model.n_states; ++s)
    model.transition[s].resize(model.actions[s].size());
  for (const auto& entry : j.at("transition")) {
    if (!entry.is_array() || entry.size() != 4)
      throw std::invalid_argument("transition entries must be [s, a, s', p]");
    int s = entry[0].get<int>();
    int a = entry[1].get<int>();
    int next = entry[2].get<int>();
    double prob = entry[3].get<double>();
    if (s < 0 || s >= model.n_states || a < 0 ||
        a >= static_cast<int>(model.actions[s].size()) || next < 0 || next >= model.n_states)
      throw std::invalid_argument("transition entry out of range");
    model.transition[s][a].push_back({next, prob});
  }

  const json& rewards = j.at("rewards");
  model.rewards.resize(rewards.size());
  for (std::size_t i = 0; i < rewards.size(); ++i) {
    auto& table = model.rewards[i];
    table.resize(model.n_states);
    std::vector<std::vector<char>> seen(model.n_states);
    for (int s = 0; s < model.n_states; ++s) {
      table[s].assign(model.actions[s].size(), 0.0);
      seen[s].assign(model.actions[s].size(), 0);
    }
    for (const auto& entry : rewards[i]) {
      if (!entry.is_array() || entry.size() != 3)
        throw std::invalid_argument("reward entries must be [s, a, value]");
      int s = entry[0].get<int>();
      int a = entry[1].get<int>();
      if (s < 0 || s >= model.n_states || a < 0 ||
          a >= static_cast<int>(model.actions[s].size()))
        throw std::invalid_argument("reward entry out of range");
      table[s][a] = value_of_json(entry[2]);
      seen[s][a] = 1;
    }
    for (int s = 0; s < model.n_states; ++s)
      for (int a = 0; a < static_cast<int>(model.actions[s].size()); ++a)
        if (!seen[s][a]) {
          std::ostringstream os;
          os << "reward table " << i << " is missing the pair (" << s << ", " << a << ")";
          throw std::invalid_argument(os.str());
        }
  }
  return model;
}

FiniteCMDP load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open model file: " + path);
  json j;
  in >> j;
  return model_from_json(j);
}

void save_model(const FiniteCMDP& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write model file: " + path);
  out << canonical_model_text(model);
}

std::string canonical_model_text(const FiniteCMDP& model) {
  return model_to_json(model).dump(2) + "\n";
}

std::string model_hash(const FiniteCMDP& model) {
  const std::string text = canonical_model_text(model);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << "fnv1a64:" << std::hex << h;
  return os.str();
}

json policy_to_json(const RandomizedStationaryPolicy& policy) {
  json j;
  j["type"] = "stationary";
  j["probs"] = policy.probs;
  return j;
}

json policy_to_json(const ChatteringPolicy& policy) {
  json j;
  j["type"] = "chattering";
  j["selectors"] = policy.selectors;
  j["weights"] = policy.weights;
  return j;
}

LoadedPolicy load_policy(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open policy file: " + path);
  json j;
  in >> j;

  LoadedPolicy out;
  const std::string type = j.at("type").get<std::string>();
  if (type == "stationary") {
    out.stationary.probs = j.at("probs").get<std::vector<std::vector<double>>>();
  } else if (type == "chattering") {
    out.is_chattering = true;
    out.chattering.selectors = j.at("selectors").get<std::vector<DeterministicPolicy>>();
    out.chattering.weights = j.at("weights").get<std::vector<std::vector<double>>>();
  } else {
    throw std::invalid_argument("unknown policy type: " + type);
  }
  return out;
}

json report_envelope(const FiniteCMDP& model, const json& parameters) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["tool_version"] = kToolVersion;
  j["model_hash"] = model_hash(model);
  j["parameters"] = parameters;
  return j;
}

}  // namespace occulp
