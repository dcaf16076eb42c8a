#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "argdec/argdec.hpp"
#include "support/random_scenario.hpp"

using namespace argdec;

namespace {

const OptionSet kOptions{"AnsReq", "Charge", "Wait"};
const VariableSet kVars({{"x", {0, 1}}, {"y", {0, 1}}});

Principle principle(std::string id, Condition c, std::vector<std::vector<std::string>> classes) {
  return {std::move(id), std::move(c), {std::move(classes)}};
}

WorldState xy(int x, int y) { return make_world(kVars, {{"x", Value(x)}, {"y", Value(y)}}); }

std::vector<std::string> names(const OptionSubset& s) { return kOptions.names_of(s); }

}  // namespace

TEST(Permissible, SingleClassWithEverythingLacksGrip) {
  const auto p = principle("p", Condition::always(), {{"AnsReq", "Charge", "Wait"}});
  EXPECT_EQ(permissible_per_principle(p, kOptions, xy(0, 0), kVars), kOptions.all());
}

TEST(Permissible, TopClassOfTwo) {
  const OptionSet two{"AnsReq", "Charge"};
  const auto p = principle("p", Condition::always(), {{"AnsReq"}, {"Charge"}});
  EXPECT_EQ(two.names_of(permissible_per_principle(p, two, xy(0, 0), kVars)),
            std::vector<std::string>{"AnsReq"});
}

TEST(Permissible, EveryOptionItsOwnClass) {
  const auto p = principle("p", Condition::always(), {{"Wait"}, {"Charge"}, {"AnsReq"}});
  EXPECT_EQ(names(permissible_per_principle(p, kOptions, xy(0, 0), kVars)), std::vector<std::string>{"Wait"});
}

TEST(Permissible, UnmentionedOptionsShareTheBottom) {
  const auto empty = principle("p", Condition::always(), {});
  EXPECT_EQ(permissible_per_principle(empty, kOptions, xy(0, 0), kVars), kOptions.all());
}

TEST(Permissible, NonApplyingPrincipleIsAContractViolation) {
  const auto p = principle("p", Condition::eq("x", 1), {{"AnsReq"}});
  EXPECT_THROW(permissible_per_principle(p, kOptions, xy(0, 0), kVars), ContractViolation);
}

TEST(Applicable, NothingHolds) {
  PrincipleStructure ps{{{principle("p", Condition::eq("x", 1), {{"AnsReq"}})}}};
  const auto app = applicable_principles(ps, xy(0, 0), kVars);
  EXPECT_TRUE(app.all.empty());
  EXPECT_TRUE(app.max_ranked.empty());
}

TEST(Applicable, HigherClassShadowsLower) {
  PrincipleStructure ps{{{principle("hi", Condition::always(), {{"AnsReq"}})},
                         {principle("lo", Condition::always(), {{"Charge"}})}}};
  const auto app = applicable_principles(ps, xy(0, 0), kVars);
  ASSERT_EQ(app.all.size(), 2u);
  ASSERT_EQ(app.max_ranked.size(), 1u);
  EXPECT_EQ(app.max_ranked[0].id(), "hi");
}

TEST(Applicable, SameClassPrinciplesAreBothMaximal) {
  PrincipleStructure ps{{{principle("b", Condition::always(), {{"AnsReq"}}),
                          principle("a", Condition::always(), {{"AnsReq", "Charge"}})},
                         {principle("c", Condition::always(), {{"Charge"}})}}};
  const auto app = applicable_principles(ps, xy(0, 0), kVars);
  ASSERT_EQ(app.max_ranked.size(), 2u);
  EXPECT_EQ(app.max_ranked[0].id(), "a");
  EXPECT_EQ(app.max_ranked[1].id(), "b");
  EXPECT_EQ(names(deontic_filter(ps, kOptions, xy(0, 0), kVars)), std::vector<std::string>{"AnsReq"});
}

TEST(Filter, NothingApplicableKeepsEveryOption) {
  PrincipleStructure ps{{{principle("p", Condition::eq("y", 1), {{"AnsReq"}})}}};
  EXPECT_EQ(deontic_filter(ps, kOptions, xy(0, 0), kVars), kOptions.all());
  EXPECT_EQ(deontic_filter(PrincipleStructure{}, kOptions, xy(0, 0), kVars), kOptions.all());
}

TEST(Filter, DilemmaPolicies) {
  PrincipleStructure ps{{{principle("p", Condition::always(), {{"AnsReq"}}),
                          principle("q", Condition::always(), {{"Charge"}})}}};
  try {
    deontic_filter(ps, kOptions, xy(0, 0), kVars, DilemmaPolicy::Error);
    FAIL() << "expected a dilemma";
  } catch (const DilemmaError& e) {
    EXPECT_EQ(e.principles(), (std::vector<std::string>{"p", "q"}));
  }
  EXPECT_EQ(names(deontic_filter(ps, kOptions, xy(0, 0), kVars, DilemmaPolicy::Union)),
            (std::vector<std::string>{"AnsReq", "Charge"}));
  EXPECT_EQ(deontic_filter(ps, kOptions, xy(0, 0), kVars, DilemmaPolicy::PassThrough), kOptions.all());
}

TEST(Filter, RobotTableAllThreeBranches) {
  const auto s = robot::decision_scenario(robot::RobotParams{});
  const Knowledge base = robot::decision_knowledge(robot::Node::R1, 4, robot::Node::R1);
  int checked = 0;
  for (const char* prio : {"low", "high"})
    for (const char* serve : {"no", "yes"})
      for (const char* ret : {"no", "yes"}) {
        if (std::string(serve) == "no" && std::string(ret) == "yes") continue;  // returning implies serving
        auto k = base;
        k.known.emplace("priority", Value(prio));
        k.known.emplace("serve_ok", Value(serve));
        k.known.emplace("return_ok", Value(ret));
        k.known.emplace("task", Value(std::string(prio) == "high" ? "give-meds" : "fetch-water"));
        k.known.emplace("charge_ok", Value("yes"));
        const auto ws = enumerate_consistent_worlds(k, s);
        ASSERT_EQ(ws.size(), 1u);
        const auto got = s.options.names_of(deontic_filter(s, ws[0]));
        std::vector<std::string> want{"AnsReq", "Charge"};
        if (std::string(prio) == "high" && std::string(serve) == "yes") want = {"AnsReq"};
        if (std::string(prio) == "low" && std::string(ret) == "no") want = {"Charge"};
        EXPECT_EQ(got, want) << prio << " serve=" << serve << " return=" << ret;
        ++checked;
      }
  EXPECT_EQ(checked, 6);
}

TEST(Filter, ResultLiesInsideEveryMaximalPermSet) {
  test_support::ScenarioGenerator gen(23);
  for (int i = 0; i < 200; ++i) {
    const auto inst = gen.next();
    const auto& s = inst.scenario;
    for (const auto& w : enumerate_consistent_worlds(inst.knowledge, s)) {
      OptionSubset got;
      try {
        got = deontic_filter(s.principles, s.options, w, s.variables, DilemmaPolicy::Error);
      } catch (const DilemmaError&) {
        continue;
      }
      for (const auto& rp : applicable_principles(s.principles, w, s.variables).max_ranked) {
        const auto perm = permissible_per_principle(*rp.principle, s.options, w, s.variables);
        EXPECT_TRUE(std::includes(perm.begin(), perm.end(), got.begin(), got.end()));
      }
    }
  }
}

TEST(Filter, LowerClassesAndDeclarationOrderDoNotMatter) {
  test_support::ScenarioGenerator gen(29);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    const auto inst = gen.next();
    const auto& s = inst.scenario;
    for (const auto& w : enumerate_consistent_worlds(inst.knowledge, s)) {
      const auto full = deontic_filter(s.principles, s.options, w, s.variables, DilemmaPolicy::PassThrough);
      const auto app = applicable_principles(s.principles, w, s.variables);
      if (app.max_ranked.empty()) continue;
      // keep only the top applicable class
      PrincipleStructure top;
      top.classes.push_back(s.principles.classes[app.max_ranked[0].rank]);
      EXPECT_EQ(deontic_filter(top, s.options, w, s.variables, DilemmaPolicy::PassThrough), full);
      // shuffle within every class
      auto shuffled = s.principles;
      for (auto& cls : shuffled.classes) std::shuffle(cls.begin(), cls.end(), rng);
      EXPECT_EQ(deontic_filter(shuffled, s.options, w, s.variables, DilemmaPolicy::PassThrough), full);
    }
  }
}

TEST(ValidatePrinciples, StructuralErrors) {
  const OptionSet opts{"a", "b"};
  PrincipleStructure empty_class{{{}}};
  EXPECT_TRUE(validate_principles(empty_class, opts, kVars).has_errors());

  PrincipleStructure overlap{{{principle("p", Condition::always(), {{"a"}, {"a", "b"}})}}};
  const auto r = validate_principles(overlap, opts, kVars);
  ASSERT_TRUE(r.has_errors());
  EXPECT_NE(r.errors()[0].message.find("more than one class"), std::string::npos);

  PrincipleStructure ghost{{{principle("careful", Condition::eq("ghost", 1), {{"a"}})}}};
  const auto g = validate_principles(ghost, opts, kVars);
  ASSERT_EQ(g.errors().size(), 1u);
  EXPECT_NE(g.errors()[0].message.find("principle 'careful'"), std::string::npos);
  EXPECT_NE(g.errors()[0].message.find("ghost"), std::string::npos);

  PrincipleStructure dup{{{principle("p", Condition::always(), {{"a"}}), principle("p", Condition::always(), {{"b"}})}}};
  EXPECT_TRUE(validate_principles(dup, opts, kVars).has_errors());
}
