#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "occulp/model.hpp"
#include "test_util.hpp"

using namespace occulp;

TEST_CASE("well-formed model yields an empty report") {
  FiniteCMDP m = testutil::chain_model(0.5);
  ValidationReport report = validate_model(m);
  CHECK(report.records.empty());
  CHECK(report.ok());
}

TEST_CASE("sub-stochastic transition row is reported with its location") {
  FiniteCMDP m = testutil::chain_model(0.5);
  m.transition[0][0][0].prob = 0.9;
  ValidationReport report = validate_model(m);
  REQUIRE(report.records.size() == 1);
  CHECK(report.records[0].severity == Severity::Error);
  CHECK(report.records[0].location == "state 0, action 0");
  CHECK(!report.ok());
}

TEST_CASE("beta at the boundary is rejected") {
  FiniteCMDP m = testutil::chain_model(0.5);
  m.beta = 1.0;
  ValidationReport report = validate_model(m);
  REQUIRE(report.records.size() == 1);
  CHECK(report.records[0].location == "beta");
}

TEST_CASE("empty action set, bad mu, and NaN reward are all caught") {
  FiniteCMDP m = testutil::chain_model(0.5);
  m.actions[1].clear();
  m.transition[1].clear();
  m.rewards[0][1].clear();
  CHECK(!validate_model(m).ok());

  m = testutil::chain_model(0.5);
  m.mu = {0.7, 0.7};
  CHECK(!validate_model(m).ok());

  m = testutil::chain_model(0.5);
  m.rewards[0][0][0] = std::nan("");
  CHECK(!validate_model(m).ok());
}

TEST_CASE("-inf rewards are legal, +inf is not") {
  FiniteCMDP m = testutil::chain_model(0.5);
  m.rewards[0][0][0] = kNegInf;
  CHECK(validate_model(m).ok());
  m.rewards[0][0][0] = -kNegInf;
  CHECK(!validate_model(m).ok());
}

TEST_CASE("validation is pure") {
  FiniteCMDP m = testutil::chain_model(0.5);
  m.beta = 1.5;
  ValidationReport first = validate_model(m);
  ValidationReport second = validate_model(m);
  REQUIRE(first.records.size() == second.records.size());
  for (std::size_t i = 0; i < first.records.size(); ++i) {
    CHECK(first.records[i].location == second.records[i].location);
    CHECK(first.records[i].message == second.records[i].message);
  }
}

TEST_CASE("require_valid throws on a broken model") {
  FiniteCMDP m = testutil::chain_model(0.5);
  CHECK_NOTHROW(require_valid(m));
  m.beta = 0.0;
  CHECK_THROWS_AS(require_valid(m), std::invalid_argument);
}
