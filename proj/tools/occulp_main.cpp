#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <string>

#include "occulp/assumptions.hpp"
#include "occulp/chattering.hpp"
#include "occulp/io.hpp"
#include "occulp/lp.hpp"
#include "occulp/models.hpp"
#include "occulp/oracle.hpp"
#include "occulp/sim.hpp"

namespace {

using nlohmann::json;
using namespace occulp;

void emit(const json& report, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << report.dump(2) << "\n";
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::invalid_argument("cannot write report file: " + out_path);
    out << report.dump(2) << "\n";
  }
}

json values_json(const std::vector<double>& values) {
  json arr = json::array();
  for (double v : values) arr.push_back(json_of_value(v));
  return arr;
}

json occupancy_json(const OccupancyMeasure& Q) {
  json arr = json::array();
  for (int s = 0; s < static_cast<int>(Q.q.size()); ++s)
    for (int a = 0; a < static_cast<int>(Q.q[s].size()); ++a)
      if (Q.q[s][a] != 0.0) arr.push_back(json::array({s, a, Q.q[s][a]}));
  return arr;
}

json solve_report_json(const FiniteCMDP& model, const SolveReport& report, const json& params) {
  json j = report_envelope(model, params);
  j["status"] = to_string(report.status);
  j["iterations"] = report.iterations;
  j["objective"] = json_of_value(report.objective);
  if (report.status != SolveStatus::Infeasible) {
    j["performance"] = values_json(report.performance.values);
    j["policy"] = policy_to_json(report.policy);
    j["occupancy"] = occupancy_json(report.occupancy);
    j["dual_reward"] = report.dual_reward;
    j["lagrange"] = report.lagrange;
    j["certificate"] = {{"primal_residual", report.primal_residual},
                        {"dual_violation", report.dual_violation},
                        {"duality_gap", report.duality_gap}};
  }
  return j;
}

int exit_code_of(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal:
      return 0;
    case SolveStatus::Infeasible:
      return 2;
    case SolveStatus::MinusInfinityObjective:
      return 3;
  }
  return 1;
}

int cmd_solve(const std::string& model_path, const std::string& out_path) {
  FiniteCMDP model = load_model(model_path);
  SolveReport report = solve_cp(model);
  emit(solve_report_json(model, report, {{"command", "solve"}, {"model", model_path}}), out_path);
  return exit_code_of(report.status);
}

int cmd_decompose(const std::string& model_path, const std::string& out_path) {
  FiniteCMDP model = load_model(model_path);
  SolveReport report = solve_cp(model);
  json j = solve_report_json(model, report,
                             {{"command", "decompose"}, {"model", model_path}});
  if (report.status == SolveStatus::Optimal) {
    ChatteringResult result = chattering_decompose(model, report);
    json dec;
    dec["alpha"] = result.decomposition.alpha;
    dec["selectors"] = result.decomposition.selectors;
    json perfs = json::array();
    for (const auto& v : result.decomposition.performances) perfs.push_back(values_json(v.values));
    dec["selector_performance"] = std::move(perfs);
    dec["gamma"] = result.policy.weights;
    dec["deviation"] = result.report.max_deviation;
    dec["verified"] = result.report.pass;
    j["chattering"] = std::move(dec);
  }
  emit(j, out_path);
  return exit_code_of(report.status);
}

int cmd_check(const std::string& model_path, const std::string& w_path,
              const std::string& out_path, int n_max) {
  FiniteCMDP model = load_model(model_path);
  require_valid(model);

  std::ifstream in(w_path);
  if (!in) throw std::invalid_argument("cannot open weight file: " + w_path);
  json wj;
  in >> wj;
  WeightSpec w;
  w.w = wj.at("w").get<std::vector<double>>();
  if (wj.contains("c")) w.c = wj.at("c").get<double>();
  if (wj.contains("analytic_delta")) w.analytic_delta = wj.at("analytic_delta").get<double>();

  AssumptionReport report = run_assumption_suite(model, w, n_max);
  json j = report_envelope(model, {{"command", "check"},
                                   {"model", model_path},
                                   {"w", w_path},
                                   {"n_max", n_max}});
  auto bound_json = [](const BoundCheck& b) {
    return json{{"holds", b.holds},
                {"worst_state", b.worst_state},
                {"worst_action", b.worst_action},
                {"worst_criterion", b.worst_criterion},
                {"worst_margin", json_of_value(b.worst_margin)}};
  };
  j["a1"] = bound_json(report.a1);
  j["a1_prime"] = bound_json(report.a1_prime);
  j["delta"] = report.delta;
  j["beta_delta"] = report.beta_delta;
  if (w.analytic_delta) j["analytic_delta"] = *w.analytic_delta;
  j["tail_a12"] = {{"conclusive", report.tail.conclusive},
                   {"verified", report.tail.verified},
                   {"bounds", report.tail.bounds}};
  if (!report.tail.conclusive) j["tail_a12"]["status"] = "inconclusive";
  emit(j, out_path);
  return 0;
}

int cmd_simulate(const std::string& model_path, const std::string& policy_path,
                 std::uint64_t seed, long episodes, double epsilon,
                 const std::string& out_path) {
  FiniteCMDP model = load_model(model_path);
  require_valid(model);
  LoadedPolicy policy = load_policy(policy_path);

  SimulationOptions options;
  options.seed = seed;
  options.episodes = episodes;
  options.epsilon = epsilon;
  SimulationResult result = policy.is_chattering
                                ? simulate(model, policy.chattering, options)
                                : simulate(model, policy.stationary, options);

  json j = report_envelope(model, {{"command", "simulate"},
                                   {"model", model_path},
                                   {"policy", policy_path},
                                   {"seed", seed},
                                   {"episodes", episodes},
                                   {"epsilon", epsilon}});
  j["estimates"] = values_json(result.estimates);
  j["std_errors"] = result.std_errors;
  j["neg_inf_episodes"] = result.neg_inf_episodes;
  j["horizon"] = result.horizon;
  emit(j, out_path);
  return 0;
}

int cmd_oracle(const std::string& model_path, const std::string& out_path) {
  FiniteCMDP model = load_model(model_path);
  OracleResult result = brute_force_cp(model);
  json j = report_envelope(model, {{"command", "oracle"}, {"model", model_path}});
  j["status"] = to_string(result.status);
  j["value"] = json_of_value(result.value);
  j["alpha"] = result.alpha;
  j["support"] = result.support;
  emit(j, out_path);
  return exit_code_of(result.status);
}

struct MakeArgs {
  std::string example;
  std::string out_path;
  std::string w_out_path;
  double c = 4.0;
  double m_bar = 1.0;
  double beta = 0.85;
  double d1 = -30.0;
  int grid = 41;
  double s_max = 10.0;
  int n_quad = 64;
  int n_trunc = 50;
  std::uint64_t seed = 0;
  int n_states = 4;
  int n_actions = 3;
  int m = 1;
  double margin = 0.1;
};

int cmd_make(const MakeArgs& args) {
  FiniteCMDP model;
  WeightSpec weight;
  bool has_weight = false;

  DiscretizationSpec spec;
  spec.n_states = args.grid;
  spec.s_max = args.s_max;
  spec.n_action_grid = args.grid;
  spec.n_quad = args.n_quad;

  if (args.example == "ex1") {
    BuiltModel built = example1(args.c, spec, args.beta, args.d1);
    model = std::move(built.model);
    weight = std::move(built.weight);
    has_weight = true;
  } else if (args.example == "ex2") {
    BuiltModel built = example2(args.c, args.m_bar, spec, args.beta, args.d1);
    for (const auto& warning : built.warnings) std::cerr << "warning: " << warning << "\n";
    model = std::move(built.model);
    weight = std::move(built.weight);
    has_weight = true;
  } else if (args.example == "ex3") {
    model = example3(spec, args.beta, args.d1);
  } else if (args.example == "ex4-i" || args.example == "ex4-ii") {
    Example4Model built = example4(
        args.example == "ex4-i" ? Example4Variant::I : Example4Variant::II, args.n_trunc,
        args.beta);
    model = std::move(built.model);
    weight = std::move(built.weight);
    has_weight = true;
  } else if (args.example == "random") {
    model = random_cmdp(args.seed, args.n_states, args.n_actions, args.m, {0.0, 1.0},
                        args.margin);
  } else {
    throw std::invalid_argument("unknown example: " + args.example);
  }

  require_valid(model);
  if (args.out_path.empty()) {
    std::cout << canonical_model_text(model);
  } else {
    save_model(model, args.out_path);
  }
  if (!args.w_out_path.empty()) {
    if (!has_weight) throw std::invalid_argument("no weight function for this example");
    json wj;
    wj["w"] = weight.w;
    if (weight.c) wj["c"] = *weight.c;
    if (weight.analytic_delta) wj["analytic_delta"] = *weight.analytic_delta;
    std::ofstream out(args.w_out_path);
    if (!out) throw std::invalid_argument("cannot write weight file: " + args.w_out_path);
    out << wj.dump(2) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constrained discounted MDP solver over occupancy measures"};
  app.require_subcommand(1);

  std::string model_path, policy_path, out_path, w_path;
  std::uint64_t seed = 0;
  long episodes = 100000;
  double epsilon = 1e-6;
  int n_max = 200;

  auto* solve = app.add_subcommand("solve", "solve the constrained problem");
  solve->add_option("--model", model_path)->required();
  solve->add_option("--out", out_path);

  auto* decompose = app.add_subcommand("decompose", "solve and build the chattering policy");
  decompose->add_option("--model", model_path)->required();
  decompose->add_option("--out", out_path);

  auto* check = app.add_subcommand("check", "verify the weight-function assumptions");
  check->add_option("--model", model_path)->required();
  check->add_option("--w", w_path)->required();
  check->add_option("--out", out_path);
  check->add_option("--n-max", n_max);

  auto* simulate_cmd = app.add_subcommand("simulate", "Monte-Carlo policy evaluation");
  simulate_cmd->add_option("--model", model_path)->required();
  simulate_cmd->add_option("--policy", policy_path)->required();
  simulate_cmd->add_option("--seed", seed);
  simulate_cmd->add_option("--episodes", episodes);
  simulate_cmd->add_option("--epsilon", epsilon);
  simulate_cmd->add_option("--out", out_path);

  auto* oracle = app.add_subcommand("oracle", "brute-force ground truth for tiny instances");
  oracle->add_option("--model", model_path)->required();
  oracle->add_option("--out", out_path);

  MakeArgs make_args;
  auto* make = app.add_subcommand("make", "build an example or random model file");
  make->add_option("--example", make_args.example,
                   "ex1 | ex2 | ex3 | ex4-i | ex4-ii | random")
      ->required();
  make->add_option("--out", make_args.out_path);
  make->add_option("--w-out", make_args.w_out_path);
  make->add_option("--c", make_args.c);
  make->add_option("--m-bar", make_args.m_bar);
  make->add_option("--beta", make_args.beta);
  make->add_option("--d1", make_args.d1);
  make->add_option("--grid", make_args.grid);
  make->add_option("--s-max", make_args.s_max);
  make->add_option("--n-quad", make_args.n_quad);
  make->add_option("--n-trunc", make_args.n_trunc);
  make->add_option("--seed", make_args.seed);
  make->add_option("--n-states", make_args.n_states);
  make->add_option("--n-actions", make_args.n_actions);
  make->add_option("--m", make_args.m);
  make->add_option("--margin", make_args.margin);

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(model_path, out_path);
    if (decompose->parsed()) return cmd_decompose(model_path, out_path);
    if (check->parsed()) return cmd_check(model_path, w_path, out_path, n_max);
    if (simulate_cmd->parsed())
      return cmd_simulate(model_path, policy_path, seed, episodes, epsilon, out_path);
    if (oracle->parsed()) return cmd_oracle(model_path, out_path);
    if (make->parsed()) return cmd_make(make_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
