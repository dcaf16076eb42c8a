#include <gtest/gtest.h>

#include "argdec/argdec.hpp"
#include "support/oracle.hpp"
#include "support/random_scenario.hpp"

using namespace argdec;

namespace {

// s in {s0, s1, s2}; the agent does not know s.
Scenario mixture(double p0, double p1) {
  Scenario s;
  s.name = "mixture";
  s.variables = VariableSet({{"s", {"s0", "s1", "s2"}}});
  s.credences = CredenceModel({{"s", {}, {{{}, {p0, p1, 1.0 - p0 - p1}}}}});
  s.options = OptionSet{"a1", "a2"};
  s.utility.rules = {{Condition::eq("s", "s1"), 10.0}, {Condition::always(), 0.0}};
  return s;
}

}  // namespace

TEST(Outcome, FullKnowledgeDeterministicKernelIsAPointMass) {
  auto s = mixture(1.0, 0.0);
  s.outcome.rules.push_back({"a1", Condition::always(), {{1.0, {{"s", Value("s1")}}, {}}}});
  const Knowledge k{{{"s", Value("s0")}}};
  const auto s1 = make_world(s.variables, {{"s", Value("s1")}});
  const auto s2 = make_world(s.variables, {{"s", Value("s2")}});
  EXPECT_DOUBLE_EQ(outcome_given_knowledge(k, "a1", s1, s), 1.0);
  EXPECT_DOUBLE_EQ(outcome_given_knowledge(k, "a1", s2, s), 0.0);
}

TEST(Outcome, TwoSourcesToOneSuccessorSumToOne) {
  auto s = mixture(0.7, 0.3);
  s.outcome.rules.push_back({"a1", Condition::always(), {{1.0, {{"s", Value("s2")}}, {}}}});
  const auto s2 = make_world(s.variables, {{"s", Value("s2")}});
  EXPECT_DOUBLE_EQ(outcome_given_knowledge(Knowledge{}, "a1", s2, s), 1.0);
}

TEST(Outcome, MixtureKeepsSourceWeights) {
  auto s = mixture(0.7, 0.3);
  s.outcome.rules.push_back({"a1", Condition::eq("s", "s0"), {{1.0, {{"s", Value("s1")}}, {}}}});
  s.outcome.rules.push_back({"a1", Condition::eq("s", "s1"), {{1.0, {{"s", Value("s2")}}, {}}}});
  const auto s1 = make_world(s.variables, {{"s", Value("s1")}});
  const auto s2 = make_world(s.variables, {{"s", Value("s2")}});
  EXPECT_DOUBLE_EQ(outcome_given_knowledge(Knowledge{}, "a1", s1, s), 0.7);
  EXPECT_DOUBLE_EQ(outcome_given_knowledge(Knowledge{}, "a1", s2, s), 0.3);
}

TEST(Outcome, UncoveredPairsSelfLoopOrFail) {
  auto s = mixture(1.0, 0.0);
  const auto s0 = make_world(s.variables, {{"s", Value("s0")}});
  EXPECT_DOUBLE_EQ(outcome_given_knowledge(Knowledge{}, "a2", s0, s), 1.0);
  s.outcome.missing = MissingTransition::Error;
  EXPECT_THROW(outcome_given_knowledge(Knowledge{}, "a2", s0, s), ModelError);
}

TEST(Outcome, AddMovesIntegerVariables) {
  const VariableSet vars({{"n", {0, 1, 2}}});
  const Effect e{1.0, {}, {{"n", 1}}};
  const auto w = OutcomeModel::apply(make_world(vars, {{"n", Value(1)}}), e, vars);
  EXPECT_EQ(value_of(w, vars, "n"), Value(2));
  EXPECT_THROW(OutcomeModel::apply(w, e, vars), ModelError);
}

TEST(ExpectedUtility, PointMassOnUtilityFive) {
  auto s = mixture(1.0, 0.0);
  s.utility.rules = {{Condition::eq("s", "s0"), 5.0}, {Condition::always(), 0.0}};
  EXPECT_DOUBLE_EQ(expected_utility("a1", Knowledge{}, s), 5.0);
}

TEST(ExpectedUtility, SplitSuccessorsSevenTenthsOfTen) {
  auto s = mixture(1.0, 0.0);
  s.outcome.rules.push_back(
      {"a1", Condition::always(), {{0.7, {{"s", Value("s1")}}, {}}, {0.3, {{"s", Value("s2")}}, {}}}});
  EXPECT_DOUBLE_EQ(expected_utility("a1", Knowledge{}, s), 7.0);
}

TEST(ExpectedUtility, ConstantUtilityGivesTheConstant) {
  test_support::ScenarioGenerator gen(3);
  for (int i = 0; i < 100; ++i) {
    auto inst = gen.next();
    inst.scenario.utility = UtilityFunction::constant(4.5);
    for (const auto& o : inst.scenario.options.names())
      EXPECT_NEAR(expected_utility(o, inst.knowledge, inst.scenario), 4.5, 1e-9);
  }
}

TEST(ExpectedUtility, AgreesWithOracleOnRandomScenarios) {
  test_support::ScenarioGenerator gen(17);
  for (int i = 0; i < 300; ++i) {
    const auto inst = gen.next();
    for (const auto& o : inst.scenario.options.names())
      EXPECT_NEAR(expected_utility(o, inst.knowledge, inst.scenario),
                  test_support::oracle::expected_utility(inst.scenario, inst.knowledge, o), 1e-9);
  }
}

TEST(InstrumentalChoice, HigherEuWins) {
  auto s = mixture(1.0, 0.0);
  s.outcome.rules.push_back(
      {"a1", Condition::always(), {{0.7, {{"s", Value("s1")}}, {}}, {0.3, {{"s", Value("s2")}}, {}}}});
  s.outcome.rules.push_back(
      {"a2", Condition::always(), {{0.3, {{"s", Value("s1")}}, {}}, {0.7, {{"s", Value("s2")}}, {}}}});
  EXPECT_DOUBLE_EQ(expected_utility("a2", Knowledge{}, s), 3.0);
  EXPECT_EQ(s.options.names_of(instrumental_choice(s.options.all(), Knowledge{}, s)),
            std::vector<std::string>{"a1"});
}

TEST(InstrumentalChoice, TiesKeepEveryOptionAndSingletonsStay) {
  auto s = mixture(1.0, 0.0);
  EXPECT_EQ(instrumental_choice(s.options.all(), Knowledge{}, s), s.options.all());
  EXPECT_EQ(instrumental_choice({1}, Knowledge{}, s), OptionSubset{1});
}

TEST(InstrumentalChoice, ToleranceIsAbsolute) {
  const std::vector<double> eu{1.0, 1.0 + 5e-10, 1.0 + 2e-9};
  EXPECT_EQ(argmax_within({0, 1, 2}, eu), (OptionSubset{2}));
  EXPECT_EQ(argmax_within({0, 1}, eu), (OptionSubset{0, 1}));
}
