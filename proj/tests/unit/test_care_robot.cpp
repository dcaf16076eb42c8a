#include <gtest/gtest.h>

#include <json.hpp>

#include "argdec/argdec.hpp"

using namespace argdec;
using namespace argdec::robot;

namespace {

const RobotParams kParams{};

RobotWorld at(Node location, int energy, std::optional<Request> request = std::nullopt) {
  return {location, energy, kParams.capacity, request, 0, Status::Ok};
}

constexpr std::size_t kFetch = 0, kMeds = 1, kReanimation = 2;

}  // namespace

TEST(Facility, ShortestDistances) {
  EXPECT_EQ(shortest_distance(Node::R1, Node::R1), 0);
  EXPECT_EQ(shortest_distance(Node::R1, Node::CS), 4);
  EXPECT_EQ(shortest_distance(Node::R2, Node::R3), 3);
  EXPECT_EQ(shortest_distance(Node::CS, Node::R2), 4);
  const auto all = {Node::R1, Node::R2, Node::R3, Node::CS, Node::J1, Node::J2, Node::J3, Node::J4};
  for (auto a : all)
    for (auto b : all) {
      EXPECT_EQ(shortest_distance(a, b), shortest_distance(b, a));
      for (auto c : all) EXPECT_LE(shortest_distance(a, c), shortest_distance(a, b) + shortest_distance(b, c));
    }
}

TEST(Facility, NodeNamesRoundTrip) {
  for (auto n : {Node::R1, Node::R2, Node::R3, Node::CS, Node::J1, Node::J4})
    EXPECT_EQ(parse_node(to_string(n)), n);
  EXPECT_FALSE(parse_node("R9").has_value());
}

TEST(Step, AnsweringMovesSpendsAndRewards) {
  const auto r = step(at(Node::CS, 10, Request{Node::R2, kMeds}), Action::AnsReq, kParams);
  EXPECT_TRUE(r.served);
  EXPECT_EQ(r.world.location, Node::R2);
  EXPECT_EQ(r.world.energy, 4);
  EXPECT_DOUBLE_EQ(r.reward, 3.0);
  EXPECT_FALSE(r.world.pending_request.has_value());
  EXPECT_EQ(r.world.time, 1);
}

TEST(Step, ChargingRefillsAtTheStation) {
  const auto r = step(at(Node::R2, 5), Action::Charge, kParams);
  EXPECT_EQ(r.world.location, Node::CS);
  EXPECT_EQ(r.world.energy, kParams.capacity);
  EXPECT_EQ(r.world.status, Status::Ok);
}

TEST(Step, RunningShortDepletes) {
  const auto r = step(at(Node::R1, 3), Action::Charge, kParams);
  EXPECT_EQ(r.world.status, Status::Depleted);
  EXPECT_EQ(r.world.energy, 0);
  const auto s = step(at(Node::CS, 3, Request{Node::R3, kReanimation}), Action::AnsReq, kParams);
  EXPECT_EQ(s.world.status, Status::Depleted);
  EXPECT_FALSE(s.served);
  EXPECT_DOUBLE_EQ(s.reward, 0.0);
}

TEST(Step, AnsweringNothingWarns) {
  const auto r = step(at(Node::R1, 5), Action::AnsReq, kParams);
  EXPECT_FALSE(r.warning.empty());
  EXPECT_EQ(r.world.energy, 5);
  EXPECT_EQ(r.world.location, Node::R1);
}

TEST(Params, DefaultsValidateAndRoundTrip) {
  EXPECT_TRUE(validate_params(kParams).clean());
  EXPECT_DOUBLE_EQ(kParams.stranding_penalty(), 3.8);
  const auto j = nlohmann::json::parse(params_to_json(kParams).dump());
  EXPECT_EQ(params_to_json(params_from_json(j)), params_to_json(kParams));
  auto bad = kParams;
  bad.task_probabilities = {0.5, 0.3, 0.1};
  EXPECT_TRUE(validate_params(bad).has_errors());
  auto broken = j;
  broken["capacity"] = "ten";
  EXPECT_THROW(params_from_json(broken), ValidationError);
}

TEST(DecisionScenario, ValidatesAndHidesTheTask) {
  const auto s = decision_scenario(kParams);
  EXPECT_TRUE(validate_scenario(s).clean());
  const auto k = decision_knowledge(Node::R2, 7, Node::R3);
  EXPECT_EQ(k.known.count("task"), 0u);
  EXPECT_EQ(k.known.count("priority"), 0u);
  EXPECT_EQ(enumerate_consistent_worlds(k, s).size(), 3u * 2u * 2u * 2u * 2u);
  double sum = 0.0;
  for (const auto& w : enumerate_consistent_worlds(k, s)) sum += world_probability(w, k, s);
  EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(DecisionScenario, EngineEuMatchesDirectComputation) {
  const auto s = decision_scenario(kParams);
  for (auto loc : kStations)
    for (auto room : kRooms)
      for (int e = 0; e <= kParams.capacity; ++e) {
        const auto k = decision_knowledge(loc, e, room);
        const auto direct = direct_expected_utility(kParams, loc, e, room);
        EXPECT_NEAR(expected_utility("AnsReq", k, s), direct.ans_req, 1e-9);
        EXPECT_NEAR(expected_utility("Charge", k, s), direct.charge, 1e-9);
      }
}

TEST(DilemmaFixture, ChargingIsInstrumentallyBetterButAnsweringIsRequired) {
  const auto f = build_dilemma_fixture();
  EXPECT_TRUE(validate_scenario(f.scenario).clean());
  EXPECT_NEAR(f.eu.ans_req, -1.3, 1e-12);
  EXPECT_NEAR(f.eu.charge, 0.0, 1e-12);
  EXPECT_NEAR(expected_utility("AnsReq", f.knowledge, f.scenario), f.eu.ans_req, 1e-12);
  EXPECT_EQ(f.scenario.options.names_of(deontic_filter(f.scenario, f.world)), std::vector<std::string>{"AnsReq"});
  EXPECT_EQ(instrumental_decide(f.knowledge, f.scenario, 0), "Charge");
  EXPECT_EQ(decide(f.knowledge, f.scenario, 0).option, "AnsReq");
  EXPECT_EQ(f.knowledge.known.count("task"), 0u);
}

TEST(DilemmaFixture, RejectsParametersWithoutADilemma) {
  auto p = kParams;
  // no stranding penalty: answering is also instrumentally best
  p.future_requests = 0.0;
  EXPECT_THROW(build_dilemma_fixture(p), ModelError);
}

TEST(Episode, NeedsAtLeastOneStep) {
  const auto s = decision_scenario(kParams);
  EXPECT_THROW(run_episode(s, kParams, Policy::Interlocked, 0, 1), ContractViolation);
}

TEST(Episode, SameSeedSameTrace) {
  const auto s = decision_scenario(kParams);
  const auto a = run_episode(s, kParams, Policy::Interlocked, 60, 9);
  const auto b = run_episode(s, kParams, Policy::Interlocked, 60, 9);
  EXPECT_EQ(trace_lines(a), trace_lines(b));
  EXPECT_EQ(a.trace.size(), 60u);
  const auto line = nlohmann::json::parse(trace_line(a.trace.front()));
  for (const char* key : {"time", "location", "energy", "action", "request", "reward", "status"})
    EXPECT_TRUE(line.contains(key)) << key;
}

TEST(Episode, DilemmaStartSeparatesThePolicies) {
  const auto f = build_dilemma_fixture();
  const auto inter = run_episode(f.scenario, kParams, Policy::Interlocked, 1, 3, f.robot);
  EXPECT_EQ(inter.trace[0].action, "AnsReq");
  EXPECT_EQ(inter.metrics.reanimations_attempted, 1);
  EXPECT_EQ(inter.metrics.served_high, 1);
  const auto inst = run_episode(f.scenario, kParams, Policy::Instrumental, 1, 3, f.robot);
  EXPECT_EQ(inst.trace[0].action, "Charge");
  EXPECT_EQ(inst.metrics.reanimations_missed, 1);
  const auto seq = run_episode(f.scenario, kParams, Policy::Sequential, 1, 3, f.robot);
  EXPECT_EQ(seq.trace[0].action, "AnsReq");
}

TEST(Episode, ScenarioCarriesItsParameters) {
  const auto s = decision_scenario(kParams);
  EXPECT_EQ(trace_lines(run_episode(s, Policy::Instrumental, 30, 4)),
            trace_lines(run_episode(s, kParams, Policy::Instrumental, 30, 4)));
}

TEST(Episode, MetricsAreConsistent) {
  const auto s = decision_scenario(kParams);
  for (auto policy : {Policy::Instrumental, Policy::Sequential, Policy::Interlocked}) {
    const auto m = run_episodes(s, kParams, policy, 20, 100, 5);
    EXPECT_GT(m.requests, 0);
    // every request is served, missed, or still pending at the end of an episode
    EXPECT_LE(m.served_low + m.served_high + m.missed, m.requests);
    EXPECT_GE(m.served_low + m.served_high + m.missed, m.requests - 20);
    EXPECT_LE(m.reanimations_missed, m.reanimations);
  }
}

TEST(Policy, NamesRoundTrip) {
  for (auto p : {Policy::Instrumental, Policy::Sequential, Policy::Interlocked})
    EXPECT_EQ(parse_policy(to_string(p)), p);
  EXPECT_FALSE(parse_policy("greedy").has_value());
}
