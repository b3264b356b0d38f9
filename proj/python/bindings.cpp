#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "occulp/assumptions.hpp"
#include "occulp/chattering.hpp"
#include "occulp/io.hpp"
#include "occulp/lp.hpp"
#include "occulp/models.hpp"
#include "occulp/oracle.hpp"
#include "occulp/sim.hpp"

namespace py = pybind11;
using namespace occulp;

namespace {

std::string severity_name(Severity s) { return s == Severity::Error ? "error" : "warning"; }

}  // namespace

PYBIND11_MODULE(occulp, m) {
  m.doc() = "Constrained discounted MDP solver over occupancy measures";
  m.attr("__version__") = kToolVersion;

  py::class_<ActionLabel>(m, "ActionLabel")
      .def(py::init([](std::string name, std::optional<double> coord) {
             return ActionLabel{std::move(name), coord};
           }),
           py::arg("name"), py::arg("coord") = std::nullopt)
      .def_readwrite("name", &ActionLabel::name)
      .def_readwrite("coord", &ActionLabel::coord);

  py::class_<FiniteCMDP>(m, "FiniteCMDP")
      .def(py::init<>())
      .def_readwrite("n_states", &FiniteCMDP::n_states)
      .def_readwrite("beta", &FiniteCMDP::beta)
      .def_readwrite("mu", &FiniteCMDP::mu)
      .def_readwrite("bounds", &FiniteCMDP::bounds)
      .def_property_readonly("n_pairs", &FiniteCMDP::num_pairs)
      .def("num_actions", &FiniteCMDP::num_actions)
      .def("action_label",
           [](const FiniteCMDP& model, int s, int a) { return model.actions[s][a]; })
      .def("reward", [](const FiniteCMDP& model, int i, int s, int a) {
        return model.rewards[i][s][a];
      })
      .def("to_json", [](const FiniteCMDP& model) { return canonical_model_text(model); })
      .def_static("from_json",
                  [](const std::string& text) {
                    return model_from_json(nlohmann::json::parse(text));
                  })
      .def("hash", &model_hash);

  m.def("load_model", &load_model, py::arg("path"));
  m.def("save_model", &save_model, py::arg("model"), py::arg("path"));

  m.def("validate_model", [](const FiniteCMDP& model) {
    std::vector<std::tuple<std::string, std::string, std::string>> records;
    for (const auto& r : validate_model(model).records)
      records.emplace_back(severity_name(r.severity), r.location, r.message);
    return records;
  });

  py::class_<RandomizedStationaryPolicy>(m, "RandomizedStationaryPolicy")
      .def(py::init([](std::vector<std::vector<double>> probs) {
             RandomizedStationaryPolicy phi;
             phi.probs = std::move(probs);
             return phi;
           }),
           py::arg("probs"))
      .def_readwrite("probs", &RandomizedStationaryPolicy::probs)
      .def("is_deterministic", &RandomizedStationaryPolicy::is_deterministic,
           py::arg("tol") = 1e-12);

  py::class_<OccupancyMeasure>(m, "OccupancyMeasure")
      .def_readwrite("q", &OccupancyMeasure::q)
      .def("total_mass", &OccupancyMeasure::total_mass)
      .def("state_marginal", &OccupancyMeasure::state_marginal);

  py::class_<ChatteringPolicy>(m, "ChatteringPolicy")
      .def_readwrite("selectors", &ChatteringPolicy::selectors)
      .def_readwrite("weights", &ChatteringPolicy::weights)
      .def("size", &ChatteringPolicy::size)
      .def("as_stationary", &ChatteringPolicy::as_stationary);

  m.def("deterministic_policy", &RandomizedStationaryPolicy::from_deterministic,
        py::arg("model"), py::arg("selector"));
  m.def("occupancy_of_stationary", &occupancy_of_stationary);
  m.def("evaluate_from_occupancy",
        [](const FiniteCMDP& model, const OccupancyMeasure& q) {
          return evaluate_from_occupancy(model, q).values;
        });
  m.def("evaluate_stationary",
        [](const FiniteCMDP& model, const RandomizedStationaryPolicy& phi) {
          return evaluate_stationary(model, phi).values;
        });
  m.def("extract_policy", &extract_policy);
  m.def("flow_residual", &flow_residual);

  py::class_<SolveReport>(m, "SolveReport")
      .def_property_readonly("status",
                             [](const SolveReport& r) { return std::string(to_string(r.status)); })
      .def_property_readonly("performance",
                             [](const SolveReport& r) { return r.performance.values; })
      .def_readonly("policy", &SolveReport::policy)
      .def_readonly("occupancy", &SolveReport::occupancy)
      .def_readonly("dual_reward", &SolveReport::dual_reward)
      .def_readonly("lagrange", &SolveReport::lagrange)
      .def_readonly("iterations", &SolveReport::iterations)
      .def_readonly("objective", &SolveReport::objective);
  m.def("solve_cp", &solve_cp);

  py::class_<Decomposition>(m, "Decomposition")
      .def_readonly("selectors", &Decomposition::selectors)
      .def_readonly("alpha", &Decomposition::alpha)
      .def_property_readonly("performances", [](const Decomposition& d) {
        std::vector<std::vector<double>> out;
        for (const auto& v : d.performances) out.push_back(v.values);
        return out;
      });
  py::class_<ChatteringReport>(m, "ChatteringReport")
      .def_readonly("max_deviation", &ChatteringReport::max_deviation)
      .def_readonly("max_weight_sum_error", &ChatteringReport::max_weight_sum_error)
      .def_readonly("ok", &ChatteringReport::pass);
  py::class_<ChatteringResult>(m, "ChatteringResult")
      .def_readonly("decomposition", &ChatteringResult::decomposition)
      .def_readonly("policy", &ChatteringResult::policy)
      .def_readonly("report", &ChatteringResult::report);
  m.def("chattering_decompose", &chattering_decompose);
  m.def("candidate_policies",
        [](const FiniteCMDP& model, const OccupancyMeasure& q_star) {
          return candidate_policies(model, q_star);
        });
  m.def("verify_chattering",
        [](const FiniteCMDP& model, const ChatteringPolicy& chat, std::vector<double> target) {
          return verify_chattering(model, chat, PerformanceVector(std::move(target)));
        });

  py::class_<WeightSpec>(m, "WeightSpec")
      .def(py::init([](std::vector<double> w) {
             WeightSpec spec;
             spec.w = std::move(w);
             return spec;
           }),
           py::arg("w"))
      .def_readwrite("w", &WeightSpec::w)
      .def_readwrite("c", &WeightSpec::c)
      .def_readwrite("analytic_delta", &WeightSpec::analytic_delta);
  py::class_<BoundCheck>(m, "BoundCheck")
      .def_readonly("holds", &BoundCheck::holds)
      .def_readonly("worst_state", &BoundCheck::worst_state)
      .def_readonly("worst_action", &BoundCheck::worst_action)
      .def_readonly("worst_criterion", &BoundCheck::worst_criterion)
      .def_readonly("worst_margin", &BoundCheck::worst_margin);
  py::class_<TailReport>(m, "TailReport")
      .def_readonly("conclusive", &TailReport::conclusive)
      .def_readonly("verified", &TailReport::verified)
      .def_readonly("delta", &TailReport::delta)
      .def_readonly("beta_delta", &TailReport::beta_delta)
      .def_readonly("bounds", &TailReport::bounds);
  py::class_<LayerReport>(m, "LayerReport")
      .def_readonly("holds", &LayerReport::holds)
      .def_readonly("layer_forward_ok", &LayerReport::layer_forward_ok)
      .def_readonly("summable", &LayerReport::summable)
      .def_readonly("partial_sum", &LayerReport::partial_sum)
      .def_readonly("growth_ratio", &LayerReport::growth_ratio);
  m.def("check_bound", &check_bound, py::arg("model"), py::arg("w"), py::arg("two_sided"));
  m.def("compute_delta", &compute_delta);
  m.def("apply_M", &apply_M);
  m.def("check_tail_a12", &check_tail_a12, py::arg("model"), py::arg("w"), py::arg("n_max"));
  m.def("check_ui_a21", &check_ui_a21, py::arg("model"), py::arg("family"), py::arg("w"),
        py::arg("l_grid"), py::arg("n"));
  m.def("check_a4", &check_a4, py::arg("model"), py::arg("layer_of_state"), py::arg("w"),
        py::arg("beta"));

  py::class_<DiscretizationSpec>(m, "DiscretizationSpec")
      .def(py::init<>())
      .def_readwrite("n_states", &DiscretizationSpec::n_states)
      .def_readwrite("s_max", &DiscretizationSpec::s_max)
      .def_readwrite("n_action_grid", &DiscretizationSpec::n_action_grid)
      .def_readwrite("n_quad", &DiscretizationSpec::n_quad);
  py::class_<BuiltModel>(m, "BuiltModel")
      .def_readonly("model", &BuiltModel::model)
      .def_readonly("weight", &BuiltModel::weight)
      .def_readonly("clipped_mass", &BuiltModel::clipped_mass)
      .def_readonly("warnings", &BuiltModel::warnings);
  py::enum_<Example4Variant>(m, "Example4Variant")
      .value("I", Example4Variant::I)
      .value("II", Example4Variant::II);
  py::class_<Example4Model>(m, "Example4Model")
      .def_readonly("model", &Example4Model::model)
      .def_readonly("weight", &Example4Model::weight)
      .def_readonly("state_start", &Example4Model::state_start)
      .def("policy", &Example4Model::policy)
      .def("policy_family", &Example4Model::policy_family);
  m.def("example1", &example1, py::arg("c"), py::arg("spec"), py::arg("beta"), py::arg("d1"));
  m.def("example2", &example2, py::arg("c"), py::arg("m_bar"), py::arg("spec"), py::arg("beta"),
        py::arg("d1"));
  m.def("example3", &example3, py::arg("spec"), py::arg("beta"), py::arg("d1"),
        py::arg("density") = nullptr, py::arg("cost") = nullptr);
  m.def("example4", &example4, py::arg("variant"), py::arg("n_trunc"), py::arg("beta"));
  m.def("random_cmdp", &random_cmdp, py::arg("seed"), py::arg("n_states"), py::arg("n_actions"),
        py::arg("m"), py::arg("reward_range"), py::arg("feasibility_margin") = 0.1);
  m.def("random_policy", &random_policy);

  py::class_<EnumeratedPolicy>(m, "EnumeratedPolicy")
      .def_readonly("f", &EnumeratedPolicy::f)
      .def_property_readonly("v", [](const EnumeratedPolicy& e) { return e.v.values; });
  py::class_<OracleResult>(m, "OracleResult")
      .def_property_readonly("status",
                             [](const OracleResult& r) { return std::string(to_string(r.status)); })
      .def_readonly("value", &OracleResult::value)
      .def_readonly("alpha", &OracleResult::alpha)
      .def_readonly("support", &OracleResult::support);
  m.def("enumerate_deterministic", &enumerate_deterministic);
  m.def("brute_force_cp", &brute_force_cp);

  py::class_<SimulationOptions>(m, "SimulationOptions")
      .def(py::init<>())
      .def_readwrite("seed", &SimulationOptions::seed)
      .def_readwrite("episodes", &SimulationOptions::episodes)
      .def_readwrite("epsilon", &SimulationOptions::epsilon)
      .def_readwrite("threads", &SimulationOptions::threads);
  py::class_<SimulationResult>(m, "SimulationResult")
      .def_readonly("estimates", &SimulationResult::estimates)
      .def_readonly("std_errors", &SimulationResult::std_errors)
      .def_readonly("neg_inf_episodes", &SimulationResult::neg_inf_episodes)
      .def_readonly("horizon", &SimulationResult::horizon)
      .def_readonly("episodes", &SimulationResult::episodes);
  m.def("simulate",
        [](const FiniteCMDP& model, const RandomizedStationaryPolicy& phi,
           const SimulationOptions& options) { return simulate(model, phi, options); });
  m.def("simulate_chattering",
        [](const FiniteCMDP& model, const ChatteringPolicy& chat,
           const SimulationOptions& options) { return simulate(model, chat, options); });
}
