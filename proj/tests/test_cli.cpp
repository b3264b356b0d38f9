#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "occulp/io.hpp"
#include "occulp/models.hpp"

using namespace occulp;
using nlohmann::json;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("occulp_cli_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

int run_cli(const std::string& args) {
  std::string command = std::string(OCCULP_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  int status = std::system(command.c_str());
  return WEXITSTATUS(status);
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  json j;
  in >> j;
  return j;
}

}  // namespace

TEST_CASE("solve: exit 0 and the closed-form value on example 4 case II") {
  TempFile model("ex4.json"), report("ex4_report.json");
  Example4Model ex = example4(Example4Variant::II, 20, 0.8);
  save_model(ex.model, model.path);

  int code = run_cli("solve --model " + model.path + " --out " + report.path);
  CHECK(code == 0);
  json j = read_json(report.path);
  CHECK(j["status"] == "optimal");
  CHECK(std::abs(j["objective"].get<double>() - 1.0) < 1e-9);
  CHECK(j["schema_version"] == kSchemaVersion);
  CHECK(j["model_hash"] == model_hash(ex.model));
}

TEST_CASE("solve: exit 2 on an infeasible constraint") {
  TempFile model("infeasible.json");
  FiniteCMDP m = random_cmdp(3, 3, 2, 1, {0.0, 1.0});
  m.bounds[0] = 1e6;
  save_model(m, model.path);
  CHECK(run_cli("solve --model " + model.path) == 2);
}

TEST_CASE("solve: exit 3 when every feasible policy has -inf value") {
  TempFile model("neginf.json");
  FiniteCMDP m = random_cmdp(4, 2, 1, 0, {0.0, 1.0});
  for (auto& row : m.rewards[0])
    for (auto& r : row) r = kNegInf;
  save_model(m, model.path);
  CHECK(run_cli("solve --model " + model.path) == 3);
}

TEST_CASE("solve: exit 1 on a malformed file") {
  TempFile model("broken.json");
  {
    std::ofstream out(model.path);
    out << "{ not json";
  }
  CHECK(run_cli("solve --model " + model.path) == 1);
}

TEST_CASE("decompose: m = 0 keeps a single selector") {
  TempFile model("dec.json"), report("dec_report.json");
  Example4Model ex = example4(Example4Variant::II, 10, 0.8);
  save_model(ex.model, model.path);
  CHECK(run_cli("decompose --model " + model.path + " --out " + report.path) == 0);
  json j = read_json(report.path);
  CHECK(j["chattering"]["alpha"].size() == 1);
  CHECK(j["chattering"]["verified"] == true);
}

TEST_CASE("make + check: example 1 assumption report") {
  TempFile model("ex1.json"), weights("ex1_w.json"), report("check_report.json");
  CHECK(run_cli("make --example ex1 --c 4 --beta 0.85 --d1 -30 --grid 41 --out " + model.path +
                " --w-out " + weights.path) == 0);
  CHECK(run_cli("check --model " + model.path + " --w " + weights.path + " --out " +
                report.path) == 0);
  json j = read_json(report.path);
  CHECK(j["a1"]["holds"] == true);
  CHECK(j["a1_prime"]["holds"] == false);
  CHECK(j["beta_delta"].get<double>() < 1.0);
  CHECK(j["tail_a12"]["conclusive"] == true);
}

TEST_CASE("simulate: stationary policy file on a tiny model") {
  TempFile model("sim.json"), policy("sim_policy.json"), report("sim_report.json");
  FiniteCMDP m = random_cmdp(8, 3, 2, 0, {0.0, 1.0});
  save_model(m, model.path);
  RandomizedStationaryPolicy phi = random_policy(m, 8);
  {
    std::ofstream out(policy.path);
    out << policy_to_json(phi).dump(2);
  }
  CHECK(run_cli("simulate --model " + model.path + " --policy " + policy.path +
                " --seed 5 --episodes 500 --epsilon 1e-3 --out " + report.path) == 0);
  json j = read_json(report.path);
  CHECK(j["estimates"].size() == 1);
  CHECK(j["parameters"]["seed"] == 5);
}

TEST_CASE("oracle: matches solve on a tiny instance") {
  TempFile model("oracle.json"), report("oracle_report.json"), report2("solve_report.json");
  FiniteCMDP m = random_cmdp(12, 3, 2, 1, {0.0, 1.0});
  save_model(m, model.path);
  CHECK(run_cli("oracle --model " + model.path + " --out " + report.path) == 0);
  CHECK(run_cli("solve --model " + model.path + " --out " + report2.path) == 0);
  double oracle_value = read_json(report.path)["value"].get<double>();
  double lp_value = read_json(report2.path)["objective"].get<double>();
  CHECK(std::abs(oracle_value - lp_value) < 1e-8);
}
