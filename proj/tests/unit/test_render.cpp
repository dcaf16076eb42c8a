#include <gtest/gtest.h>

#include <json.hpp>

#include "argdec/argdec.hpp"
#include "support/dot_check.hpp"
#include "support/random_scenario.hpp"

using namespace argdec;

namespace {

std::string fixture(const std::string& name) { return std::string(ARGDEC_FIXTURES) + "/" + name; }

Decision forces_decision(std::uint64_t seed = 0) {
  const auto s = parse_scenario(read_file(fixture("forces_18_10.json")));
  const auto k = parse_knowledge(read_file(fixture("forces_18_10.knowledge.json")));
  return decide(k, s, seed);
}

}  // namespace

TEST(GraphJson, NodeRecordsPerLayer) {
  const auto d = forces_decision();
  ASSERT_EQ(d.graph.v1.size(), 3u);
  ASSERT_EQ(d.graph.v2.size(), 2u);
  const auto j = nlohmann::json::parse(render_graph_json(d.graph));
  EXPECT_EQ(j.at("schema_version"), "1");
  const auto& nodes = j.at("nodes");
  ASSERT_EQ(nodes.size(), 6u);
  int layer[4] = {0, 0, 0, 0};
  for (const auto& n : nodes) ++layer[n.at("layer").get<int>()];
  EXPECT_EQ(layer[1], 3);
  EXPECT_EQ(layer[2], 2);
  EXPECT_EQ(layer[3], 1);
  EXPECT_EQ(nodes.back().at("id"), "dec");
  EXPECT_EQ(j.at("decision").at("chosen"), "a1");
  EXPECT_EQ(j.at("provenance").at("relevance_weights"), nlohmann::json::array({"20", "10"}));
  // 3 case->option edges for the 3 cases (each permits one option), then 2 overall edges
  const auto& edges = j.at("edges");
  ASSERT_EQ(edges.size(), 5u);
  EXPECT_EQ(edges[0].at("kind"), "pro_tanto");
  EXPECT_EQ(edges[4].at("kind"), "overall");
  EXPECT_EQ(edges[0].at("weight"), "18");
}

TEST(GraphJson, RenderingIsByteIdentical) {
  const auto a = forces_decision(5);
  const auto b = forces_decision(5);
  EXPECT_EQ(render_graph_json(a.graph), render_graph_json(b.graph));
  EXPECT_EQ(render_dot(a.graph), render_dot(b.graph));
  EXPECT_EQ(render_text(a.graph), render_text(b.graph));
}

TEST(GraphJson, RoundTripReproducesEveryRendering) {
  test_support::ScenarioGenerator gen(61);
  for (int i = 0; i < 100; ++i) {
    const auto inst = gen.next();
    auto cfg = inst.scenario.engine;
    if (i % 2) cfg.relevance.mode = RelevanceMode::Lexicographic;
    const auto g = decide(inst.knowledge, inst.scenario, i, cfg, "2026-01-01T00:00:00Z").graph;
    const auto text = render_graph_json(g);
    const auto back = parse_graph_json(text);
    EXPECT_EQ(render_graph_json(back), text);
    EXPECT_EQ(render_dot(back), render_dot(g));
    EXPECT_EQ(render_text(back), render_text(g));
  }
}

TEST(GraphJson, ParseErrorsCarryAPath) {
  EXPECT_THROW(parse_graph_json("{"), ValidationError);
  auto j = nlohmann::json::parse(render_graph_json(forces_decision().graph));
  j["nodes"][1].erase("probability");
  try {
    parse_graph_json(j.dump());
    FAIL() << "expected a validation error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("/nodes/1"), std::string::npos) << e.what();
  }
  j = nlohmann::json::parse(render_graph_json(forces_decision().graph));
  j["schema_version"] = "9";
  EXPECT_THROW(parse_graph_json(j.dump()), ValidationError);
}

TEST(Dot, WellFormedWithOneNodePerArgument) {
  const auto d = forces_decision();
  const auto text = render_dot(d.graph);
  const auto parsed = test_support::dot::parse(text);
  EXPECT_TRUE(parsed.directed);
  EXPECT_EQ(parsed.nodes.size(), d.graph.v1.size() + d.graph.v2.size() + 1);
  EXPECT_EQ(parsed.edges.size(), d.graph.e12.size() + d.graph.e23.size());
  EXPECT_EQ(parsed.subgraphs, 3u);
  EXPECT_EQ(parsed.node_attrs.at("a:a1").at("fillcolor"), "palegreen");
  EXPECT_EQ(parsed.node_attrs.at("a:a2").count("fillcolor"), 0u);
  EXPECT_EQ(parsed.node_attrs.at("dec").at("shape"), "doubleoctagon");
  EXPECT_EQ(parsed.edge_attrs[0].at("label"), "18");
}

TEST(Dot, RandomGraphsParse) {
  test_support::ScenarioGenerator gen(67);
  for (int i = 0; i < 100; ++i) {
    const auto inst = gen.next();
    const auto g = decide(inst.knowledge, inst.scenario, i).graph;
    const auto parsed = test_support::dot::parse(render_dot(g));
    EXPECT_EQ(parsed.nodes.size(), g.v1.size() + g.v2.size() + 1);
  }
}

TEST(Dot, EmptyCaseLayerStillRenders) {
  auto s = parse_scenario(read_file(fixture("forces_18_10.json")));
  s.principles.classes.clear();
  s.engine.relevance.weights.clear();
  const auto d = decide(Knowledge{{{"result", Value("none")}}}, s, 0);
  EXPECT_TRUE(d.graph.v1.empty());
  EXPECT_EQ(d.option, "a2");
  const auto dot_text = render_dot(d.graph);
  const auto parsed = test_support::dot::parse(dot_text);
  EXPECT_EQ(parsed.nodes, (std::set<std::string>{"dec"}));
  EXPECT_NE(dot_text.find("fallback"), std::string::npos);
  EXPECT_EQ(nlohmann::json::parse(render_graph_json(d.graph)).at("provenance").at("fallback"), true);
}

TEST(Text, ParagraphsFollowTheLayers) {
  const auto text = render_text(forces_decision().graph);
  const auto cases = text.find("== Case distinction ==");
  const auto agg = text.find("== Reason aggregation ==");
  const auto fin = text.find("== Final action determination ==");
  ASSERT_NE(cases, std::string::npos);
  ASSERT_NE(agg, std::string::npos);
  ASSERT_NE(fin, std::string::npos);
  EXPECT_LT(cases, agg);
  EXPECT_LT(agg, fin);
  EXPECT_EQ(text.rfind("Decision: perform a1", 0), 0u);
  EXPECT_NE(text.find("(P_w) The case <case=A, result=none> obtains (P(w|k) = 0.9)."), std::string::npos);
  EXPECT_NE(text.find("strength 18 for a1"), std::string::npos);
  EXPECT_NE(text.find("Thus: perform a1."), std::string::npos);
}
