// argdec: validate scenarios, make decisions with explanations, re-render
// saved graphs, and run the care-robot simulation.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "argdec/argdec.hpp"

namespace {

using namespace argdec;

constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDilemma = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void print_issues(const Report& r, std::ostream& out) {
  for (const auto& i : r.issues()) out << i.to_string() << "\n";
}

Scenario load_or_exit(const std::string& path) {
  auto load = load_scenario(read_file(path));
  print_issues(load.report, std::cerr);
  if (!load.ok()) throw ValidationError("scenario '" + path + "' is invalid");
  return std::move(*load.scenario);
}

struct Subject {
  Scenario scenario;
  Knowledge knowledge;
  std::optional<WorldState> world;
};

/// The scenario named on the command line, or the built-in dilemma fixture.
Subject subject(const std::string& scenario_path, const std::string& knowledge_path) {
  if (scenario_path.empty()) {
    auto f = robot::build_dilemma_fixture();
    Subject s{std::move(f.scenario), std::move(f.knowledge), std::move(f.world)};
    if (!knowledge_path.empty()) s.knowledge = parse_knowledge(read_file(knowledge_path));
    return s;
  }
  Subject s{load_or_exit(scenario_path), {}, std::nullopt};
  if (!knowledge_path.empty()) s.knowledge = parse_knowledge(read_file(knowledge_path));
  return s;
}

WorldState parse_world(const std::string& text, const VariableSet& vars) {
  const auto k = parse_knowledge(text);
  std::map<std::string, Value> a(k.known.begin(), k.known.end());
  return make_world(vars, a);
}

robot::RobotParams params_of(const Scenario& s) {
  if (!s.simulation.is_object())
    throw ValidationError("scenario '" + s.name + "' has no simulation block");
  return robot::params_from_json(s.simulation);
}

nlohmann::ordered_json metrics_json(const robot::EpisodeMetrics& m) {
  return {{"requests", m.requests},
          {"served_low", m.served_low},
          {"served_high", m.served_high},
          {"missed", m.missed},
          {"reanimations", m.reanimations},
          {"reanimations_attempted", m.reanimations_attempted},
          {"reanimations_missed", m.reanimations_missed},
          {"depletions", m.depletions},
          {"total_reward", m.total_reward}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interlocked moral and instrumental decisions with argumentation-graph explanations"};
  app.require_subcommand(1);

  // validate
  auto* validate = app.add_subcommand("validate", "Check a scenario file and report every problem");
  std::string validate_path;
  validate->add_option("scenario", validate_path, "Scenario JSON")->required();

  // decide
  auto* decide_cmd = app.add_subcommand("decide", "Decide and print the chosen option");
  std::string scenario_path, knowledge_path, world_path, graph_json_path, dot_path, text_path, timestamp;
  std::string policy_name = "interlocked";
  std::uint64_t seed = 0;
  bool lexicographic = false;
  decide_cmd->add_option("--scenario,-s", scenario_path, "Scenario JSON (default: built-in care-robot dilemma)");
  decide_cmd->add_option("--knowledge,-k", knowledge_path, "Knowledge JSON: variable -> value");
  decide_cmd->add_option("--seed", seed, "Seed for picking among ties");
  decide_cmd->add_option("--policy", policy_name, "interlocked, sequential or instrumental")
      ->check(CLI::IsMember({"interlocked", "sequential", "instrumental"}));
  decide_cmd->add_option("--world", world_path, "Full world JSON (sequential policy)");
  decide_cmd->add_option("--graph-json", graph_json_path, "Write the argumentation graph as JSON");
  decide_cmd->add_option("--dot", dot_path, "Write the argumentation graph as DOT");
  decide_cmd->add_option("--text", text_path, "Write the textual rationalization");
  decide_cmd->add_option("--timestamp", timestamp, "Timestamp recorded in the graph provenance");
  decide_cmd->add_flag("--lexicographic", lexicographic, "Use lexicographic relevance");

  // explain
  auto* explain = app.add_subcommand("explain", "Render a saved graph-JSON");
  std::string graph_path, format = "text", output_path;
  explain->add_option("graph", graph_path, "Graph JSON written by decide --graph-json")->required();
  explain->add_option("--format", format, "text, dot or json")->check(CLI::IsMember({"text", "dot", "json"}));
  explain->add_option("--output,-o", output_path, "Write to a file instead of standard output");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Run one care-robot episode and print its trace");
  std::string sim_policy = "interlocked", trace_path;
  int steps = 100;
  simulate->add_option("--scenario,-s", scenario_path, "Scenario JSON with a simulation block");
  simulate->add_option("--policy", sim_policy, "instrumental, sequential or interlocked")
      ->check(CLI::IsMember({"instrumental", "sequential", "interlocked"}));
  simulate->add_option("--steps", steps, "Time steps")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", seed, "Episode seed");
  simulate->add_option("--trace", trace_path, "Write the trace here instead of standard output");

  // compare
  auto* compare_cmd = app.add_subcommand("compare", "Side-by-side metrics of the three policies");
  int episodes = 100;
  bool as_json = false;
  compare_cmd->add_option("--scenario,-s", scenario_path, "Scenario JSON with a simulation block");
  compare_cmd->add_option("--episodes", episodes, "Episodes per policy")->check(CLI::PositiveNumber);
  compare_cmd->add_option("--steps", steps, "Time steps per episode")->check(CLI::PositiveNumber);
  compare_cmd->add_option("--seed", seed, "Seed of the episode seeds");
  compare_cmd->add_flag("--json", as_json, "Print JSON instead of a table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*validate) {
      auto load = load_scenario(read_file(validate_path));
      print_issues(load.report, std::cout);
      const auto errors = load.report.errors().size();
      const auto warnings = load.report.warnings().size();
      std::cout << (errors ? "invalid" : "valid") << ": " << errors << " error(s), " << warnings
                << " warning(s)\n";
      return errors ? kExitValidation : 0;
    }

    if (*decide_cmd) {
      auto subj = subject(scenario_path, knowledge_path);
      auto config = subj.scenario.engine;
      if (lexicographic) config.relevance.mode = RelevanceMode::Lexicographic;
      if (policy_name == "instrumental") {
        std::cout << instrumental_decide(subj.knowledge, subj.scenario, seed) << "\n";
        return 0;
      }
      if (policy_name == "sequential") {
        if (!world_path.empty())
          subj.world = parse_world(read_file(world_path), subj.scenario.variables);
        if (!subj.world) throw UsageError("the sequential policy needs --world");
        subj.scenario.engine = config;
        std::cout << sequential_decide(*subj.world, subj.knowledge, subj.scenario, seed) << "\n";
        return 0;
      }
      const auto d = decide(subj.knowledge, subj.scenario, seed, config, timestamp);
      if (!graph_json_path.empty()) write_file(graph_json_path, render_graph_json(d.graph));
      if (!dot_path.empty()) write_file(dot_path, render_dot(d.graph));
      if (!text_path.empty()) write_file(text_path, render_text(d.graph));
      std::cout << d.option << "\n";
      return 0;
    }

    if (*explain) {
      const auto g = parse_graph_json(read_file(graph_path));
      const std::string out = format == "dot" ? render_dot(g) : format == "json" ? render_graph_json(g) : render_text(g);
      if (output_path.empty())
        std::cout << out;
      else
        write_file(output_path, out);
      return 0;
    }

    if (*simulate) {
      auto subj = subject(scenario_path, "");
      const auto params = params_of(subj.scenario);
      const auto ep = robot::run_episode(subj.scenario, params, *robot::parse_policy(sim_policy), steps, seed);
      const auto trace = robot::trace_lines(ep);
      if (trace_path.empty())
        std::cout << trace;
      else
        write_file(trace_path, trace);
      std::cout << nlohmann::ordered_json{{"policy", sim_policy}, {"metrics", metrics_json(ep.metrics)}}.dump()
                << "\n";
      return 0;
    }

    if (*compare_cmd) {
      auto subj = subject(scenario_path, "");
      const auto params = params_of(subj.scenario);
      const robot::Policy policies[] = {robot::Policy::Instrumental, robot::Policy::Sequential,
                                        robot::Policy::Interlocked};
      std::vector<robot::EpisodeMetrics> results;
      for (auto p : policies) results.push_back(robot::run_episodes(subj.scenario, params, p, episodes, steps, seed));
      if (as_json) {
        nlohmann::ordered_json out{{"episodes", episodes}, {"steps", steps}, {"seed", seed}};
        for (std::size_t i = 0; i < 3; ++i) out["policies"][robot::to_string(policies[i])] = metrics_json(results[i]);
        std::cout << out.dump(2) << "\n";
        return 0;
      }
      std::cout << episodes << " episodes x " << steps << " steps, seed " << seed << "\n";
      std::printf("%-24s %14s %14s %14s\n", "metric", "instrumental", "sequential", "interlocked");
      const auto rows = metrics_json(robot::EpisodeMetrics{});
      for (auto it = rows.begin(); it != rows.end(); ++it) {
        std::printf("%-24s", it.key().c_str());
        for (const auto& m : results) {
          const auto v = metrics_json(m)[it.key()];
          std::printf(" %14s", v.is_number_float() ? format_display(v.get<double>()).c_str() : v.dump().c_str());
        }
        std::printf("\n");
      }
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DilemmaError& e) {
    std::cerr << "moral dilemma: " << e.what() << "\n";
    return kExitDilemma;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    for (const auto& i : e.issues()) std::cerr << "  " << i.to_string() << "\n";
    return kExitValidation;
  } catch (const ModelError& e) {
    std::cerr << "model error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitUsage;
}
