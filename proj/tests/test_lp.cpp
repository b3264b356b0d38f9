#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "occulp/lp.hpp"
#include "occulp/models.hpp"
#include "occulp/oracle.hpp"
#include "occulp/tolerances.hpp"
#include "test_util.hpp"

using namespace occulp;

TEST_CASE("build_lp structure on tiny models") {
  FiniteCMDP tiny = testutil::one_state_model(0.5);
  LinearProgram lp = build_lp(tiny);
  CHECK(lp.num_vars() == 1);
  CHECK(lp.flow.rows() == 1);
  CHECK(lp.reward_ge.rows() == 0);
  // x - beta x = 1  ->  x = 1/(1-beta)
  CHECK(lp.flow(0, 0) == doctest::Approx(0.5));
  CHECK(lp.flow_rhs(0) == doctest::Approx(1.0));

  FiniteCMDP random = random_cmdp(3, 4, 3, 2, {0.0, 1.0});
  LinearProgram rlp = build_lp(random);
  CHECK(rlp.num_vars() == 12);
  CHECK(rlp.flow.rows() == 4);
  CHECK(rlp.reward_ge.rows() == 2);

  Example4Model ex4 = example4(Example4Variant::II, 7, 0.8);
  LinearProgram elp = build_lp(ex4.model);
  CHECK(elp.num_vars() == ex4.model.num_pairs());
}

TEST_CASE("unconstrained LP value equals value iteration") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    FiniteCMDP m = random_cmdp(seed, 5, 3, 0, {-1.0, 2.0});
    SolveReport report = solve_cp(m);
    REQUIRE(report.status == SolveStatus::Optimal);
    CHECK(report.performance[0] ==
          doctest::Approx(testutil::vi_optimal_value(m)).epsilon(1e-9));
  }
}

TEST_CASE("unreachable constraint level is infeasible") {
  FiniteCMDP m = random_cmdp(11, 3, 2, 1, {0.0, 1.0});
  double best_j1 = -1e100;
  for (const auto& e : enumerate_deterministic(m)) best_j1 = std::max(best_j1, e.v[1]);
  m.bounds[0] = best_j1 + 1.0;  // above every mixture of deterministic values
  CHECK(solve_cp(m).status == SolveStatus::Infeasible);
}

TEST_CASE("duplicate actions make a degenerate LP that still terminates") {
  FiniteCMDP m = random_cmdp(13, 3, 2, 1, {0.0, 1.0});
  for (int s = 0; s < m.n_states; ++s) {
    m.actions[s].push_back(m.actions[s][0]);
    m.transition[s].push_back(m.transition[s][0]);
    for (int i = 0; i < m.num_criteria(); ++i) m.rewards[i][s].push_back(m.rewards[i][s][0]);
  }
  SolveReport report = solve_cp(m);
  CHECK(report.status == SolveStatus::Optimal);
}

TEST_CASE("example 4 variant II: optimum 5 beta / 4 via action 1/2 or 1/3") {
  Example4Model ex4 = example4(Example4Variant::II, 50, 0.8);
  SolveReport report = solve_cp(ex4.model);
  REQUIRE(report.status == SolveStatus::Optimal);
  CHECK(report.performance[0] == doctest::Approx(1.0).epsilon(1e-12));
  double mass_23 = report.policy.probs[ex4.state_start][2] + report.policy.probs[ex4.state_start][3];
  CHECK(mass_23 == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("example 4 variant I: truncated optimum beta (2 - 1/N)") {
  Example4Model ex4 = example4(Example4Variant::I, 50, 0.8);
  SolveReport report = solve_cp(ex4.model);
  REQUIRE(report.status == SolveStatus::Optimal);
  CHECK(report.performance[0] == doctest::Approx(0.8 * (2.0 - 1.0 / 50)).epsilon(1e-12));
  CHECK(report.performance[0] < 2 * 0.8);
}

TEST_CASE("constrained optimum matches the brute-force oracle") {
  for (std::uint64_t seed = 40; seed < 70; ++seed) {
    FiniteCMDP m = random_cmdp(seed, 3, 2, 1, {0.0, 1.0});
    SolveReport lp_report = solve_cp(m);
    OracleResult oracle = brute_force_cp(m);
    REQUIRE(lp_report.status == oracle.status);
    if (lp_report.status == SolveStatus::Optimal)
      CHECK(lp_report.performance[0] == doctest::Approx(oracle.value).epsilon(1e-8));
  }
}

TEST_CASE("LP optimum dominates every feasible deterministic policy") {
  FiniteCMDP m = random_cmdp(77, 4, 3, 2, {0.0, 1.0});
  SolveReport report = solve_cp(m);
  REQUIRE(report.status == SolveStatus::Optimal);
  for (const auto& e : enumerate_deterministic(m)) {
    bool feasible = true;
    for (int i = 0; i < m.num_constraints(); ++i)
      if (e.v[i + 1] < m.bounds[i]) feasible = false;
    if (feasible) CHECK(report.performance[0] >= e.v[0] - 1e-9);
  }
}

TEST_CASE("a basic optimum randomizes in at most m states") {
  for (std::uint64_t seed = 300; seed < 340; ++seed) {
    int m_constraints = static_cast<int>(seed % 3);
    FiniteCMDP m = random_cmdp(seed, 5, 3, m_constraints, {0.0, 1.0});
    SolveReport report = solve_cp(m);
    if (report.status != SolveStatus::Optimal) continue;
    int randomized = 0;
    for (int s = 0; s < m.n_states; ++s) {
      int supported = 0;
      for (int a = 0; a < m.num_actions(s); ++a)
        if (report.occupancy.q[s][a] > kLpTol) ++supported;
      if (supported >= 2) ++randomized;
    }
    CHECK(randomized <= m_constraints);
  }
}

TEST_CASE("feasibility and duality certificates at the optimum") {
  FiniteCMDP m = random_cmdp(99, 4, 3, 2, {0.0, 1.0});
  SolveReport report = solve_cp(m);
  REQUIRE(report.status == SolveStatus::Optimal);
  for (int i = 0; i < m.num_constraints(); ++i)
    CHECK(report.performance[i + 1] >= m.bounds[i] - 1e-9);
  CHECK(report.primal_residual < 1e-9);
  CHECK(report.dual_violation < 1e-9);
  CHECK(report.duality_gap < 1e-8);
  OccupancyMeasure& q = report.occupancy;
  CHECK(q.total_mass() == doctest::Approx(1.0 / (1.0 - m.beta)).epsilon(1e-9));
  CHECK(flow_residual(m, q) < 1e-9);
}

TEST_CASE("tightening a constraint weakly decreases the optimum") {
  for (std::uint64_t seed = 500; seed < 520; ++seed) {
    FiniteCMDP m = random_cmdp(seed, 4, 3, 1, {0.0, 1.0});
    SolveReport loose = solve_cp(m);
    REQUIRE(loose.status == SolveStatus::Optimal);
    m.bounds[0] += 0.03;
    SolveReport tight = solve_cp(m);
    if (tight.status == SolveStatus::Optimal)
      CHECK(tight.performance[0] <= loose.performance[0] + 1e-9);
  }
}

TEST_CASE("avoidable -inf objective pairs are avoided") {
  FiniteCMDP m = testutil::two_action_model(0.5, 1.0, 5.0);
  m.rewards[0][0][1] = kNegInf;  // the tempting action is poisoned
  SolveReport report = solve_cp(m);
  REQUIRE(report.status == SolveStatus::Optimal);
  CHECK(report.performance[0] == doctest::Approx(2.0));
  CHECK(report.policy.probs[0][0] == doctest::Approx(1.0));
}

TEST_CASE("unavoidable -inf objective yields minus-infinity-objective") {
  FiniteCMDP m = testutil::one_state_model(0.5, {1.0});
  m.rewards[0][0][0] = kNegInf;
  SolveReport report = solve_cp(m);
  CHECK(report.status == SolveStatus::MinusInfinityObjective);
  CHECK(is_neg_inf(report.objective));
}

TEST_CASE("-inf in a constraint reward forces the pair out of the support") {
  FiniteCMDP m = testutil::two_action_model(0.5, 1.0, 5.0);
  m.rewards.push_back({{0.0, kNegInf}});
  m.bounds = {-100.0};
  SolveReport report = solve_cp(m);
  REQUIRE(report.status == SolveStatus::Optimal);
  CHECK(report.occupancy.q[0][1] == 0.0);
  CHECK(report.performance[0] == doctest::Approx(2.0));
}

TEST_CASE("validation failures abort solve_cp") {
  FiniteCMDP m = testutil::one_state_model(0.5);
  m.beta = 1.2;
  CHECK_THROWS_AS(solve_cp(m), std::invalid_argument);
}
