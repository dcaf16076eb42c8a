#pragma once

// The declarative bundle every decision runs against, and its validation.

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "argdec/condition.hpp"
#include "argdec/core.hpp"
#include "argdec/deontic.hpp"
#include "argdec/instrumental.hpp"
#include "argdec/world.hpp"

namespace argdec {

enum class RelevanceMode { Archimedean, Lexicographic };

struct RelevanceConfig {
  RelevanceMode mode = RelevanceMode::Archimedean;
  double base = 10.0;
  /// Explicit per-class weights (highest class first); empty means base^(t - rank).
  std::vector<double> weights;

  friend bool operator==(const RelevanceConfig&, const RelevanceConfig&) = default;
};

struct EngineConfig {
  RelevanceConfig relevance;
  DilemmaPolicy dilemma_policy = DilemmaPolicy::Error;
  /// Coefficient on EU in the combined score.
  double eu_weight = 1.0;
  double tolerance = kTolerance;

  friend bool operator==(const EngineConfig&, const EngineConfig&) = default;
};

struct Scenario {
  std::string name;
  VariableSet variables;
  CredenceModel credences;
  OptionSet options;
  OutcomeModel outcome;
  UtilityFunction utility;
  PrincipleStructure principles;
  EngineConfig engine;
  /// Opaque extension block (the care-robot simulator keeps its parameters here).
  nlohmann::json simulation;
};

// Scenario-level conveniences -------------------------------------------------

inline std::vector<WorldState> enumerate_consistent_worlds(const Knowledge& k,
                                                           const Scenario& s) {
  return enumerate_consistent_worlds(k, s.variables);
}

inline double world_probability(const WorldState& w, const Knowledge& k, const Scenario& s) {
  return world_probability(w, k, s.credences, s.variables);
}

inline double outcome_given_knowledge(const Knowledge& k, const std::string& option,
                                      const WorldState& target, const Scenario& s) {
  return outcome_given_knowledge(k, option, target, s.variables, s.credences, s.outcome);
}

inline double expected_utility(const std::string& option, const Knowledge& k,
                               const Scenario& s) {
  return expected_utility(option, k, s.variables, s.credences, s.outcome, s.utility);
}

inline OptionSubset instrumental_choice(const OptionSubset& candidates, const Knowledge& k,
                                        const Scenario& s) {
  return instrumental_choice(candidates, k, s.options, s.variables, s.credences, s.outcome,
                             s.utility);
}

inline OptionSubset deontic_filter(const Scenario& s, const WorldState& w) {
  return deontic_filter(s.principles, s.options, w, s.variables, s.engine.dilemma_policy);
}

// Validation ------------------------------------------------------------------

/// Worlds beyond this count are not enumerated when checking kernel coverage.
inline constexpr std::size_t kCoverageCheckLimit = 200000;

namespace detail {

inline void validate_effect(const Effect& e, const VariableSet& vars,
                            const std::string& path, const std::string& owner, Report& r) {
  if (!(e.probability >= 0.0 && e.probability <= 1.0))
    r.error(path + "/p", owner + ": probability " + format_weight(e.probability) +
                             " outside [0,1]");
  for (const auto& [name, value] : e.set) {
    auto v = vars.find(name);
    if (!v)
      r.error(path + "/set/" + name, owner + " sets undeclared variable '" + name + "'");
    else if (!vars[*v].index_of(value))
      r.error(path + "/set/" + name, owner + " sets '" + name + "' to '" +
                                         value.to_string() + "', outside its domain");
  }
  for (const auto& [name, delta] : e.add) {
    auto v = vars.find(name);
    if (!v)
      r.error(path + "/add/" + name, owner + " adds to undeclared variable '" + name + "'");
    else if (!vars[*v].is_integer())
      r.error(path + "/add/" + name, owner + " adds to non-integer variable '" + name + "'");
    if (e.set.count(name))
      r.error(path + "/add/" + name, owner + " both sets and adds to '" + name + "'");
  }
}

inline double state_space_size(const VariableSet& vars) {
  double n = 1.0;
  for (const auto& v : vars) n *= static_cast<double>(v.domain.size());
  return n;
}

}  // namespace detail

inline Report validate_outcome(const OutcomeModel& model, const OptionSet& options,
                               const VariableSet& vars) {
  Report r;
  for (std::size_t i = 0; i < model.rules.size(); ++i) {
    const auto& rule = model.rules[i];
    const std::string path = "/outcome/rules/" + std::to_string(i);
    const std::string owner = "outcome rule " + std::to_string(i);
    if (!options.find(rule.option))
      r.error(path + "/option", owner + " references undeclared option '" + rule.option + "'");
    rule.when.validate(vars, path + "/when", owner, r);
    if (rule.effects.empty()) r.error(path + "/effects", owner + " has no effects");
    double sum = 0.0;
    for (std::size_t j = 0; j < rule.effects.size(); ++j) {
      detail::validate_effect(rule.effects[j], vars, path + "/effects/" + std::to_string(j),
                              owner, r);
      sum += rule.effects[j].probability;
    }
    if (!rule.effects.empty() && std::abs(sum - 1.0) > kTolerance)
      r.error(path + "/effects", owner + ": effect probabilities sum to " +
                                     format_weight(sum) + ", not 1");
  }
  return r;
}

inline Report validate_utility(const UtilityFunction& u, const VariableSet& vars) {
  Report r;
  std::optional<std::size_t> catch_all;
  for (std::size_t i = 0; i < u.rules.size(); ++i) {
    const std::string path = "/utility/" + std::to_string(i);
    u.rules[i].when.validate(vars, path + "/when", "utility rule " + std::to_string(i), r);
    if (!std::isfinite(u.rules[i].value))
      r.error(path + "/value", "utility rule " + std::to_string(i) + " has a non-finite value");
    if (catch_all)
      r.warning(path, "utility rule " + std::to_string(i) + " follows the catch-all and is never used");
    else if (u.rules[i].when.is_always())
      catch_all = i;
  }
  if (!catch_all) r.error("/utility", "utility has no catch-all rule (condition true)");
  return r;
}

inline Report validate_engine(const EngineConfig& e, const PrincipleStructure& principles) {
  Report r;
  const auto& rel = e.relevance;
  if (rel.mode == RelevanceMode::Archimedean) {
    if (rel.weights.empty()) {
      if (!(rel.base > 1.0) || !std::isfinite(rel.base))
        r.error("/engine/relevance/base", "relevance base must be a finite number > 1");
    } else {
      if (rel.weights.size() != principles.classes.size())
        r.error("/engine/relevance/weights",
                "relevance has " + std::to_string(rel.weights.size()) + " weights for " +
                    std::to_string(principles.classes.size()) + " principle classes");
      for (std::size_t i = 0; i < rel.weights.size(); ++i) {
        if (!(rel.weights[i] > 0.0) || !std::isfinite(rel.weights[i]))
          r.error("/engine/relevance/weights/" + std::to_string(i),
                  "relevance weights must be positive and finite");
        if (i > 0 && !(rel.weights[i] < rel.weights[i - 1]))
          r.error("/engine/relevance/weights/" + std::to_string(i),
                  "relevance weights must strictly decrease from the highest class");
      }
    }
  }
  if (!std::isfinite(e.eu_weight) || e.eu_weight < 0.0)
    r.error("/engine/eu_weight", "EU weight must be finite and non-negative");
  if (!(e.tolerance > 0.0) || !std::isfinite(e.tolerance))
    r.error("/engine/tolerance", "tolerance must be positive");
  return r;
}

/// Warns about (world, option) pairs the outcome rules leave uncovered.
inline Report check_kernel_coverage(const Scenario& s) {
  Report r;
  if (detail::state_space_size(s.variables) > static_cast<double>(kCoverageCheckLimit)) {
    r.warning("/outcome", "state space too large to check outcome coverage");
    return r;
  }
  std::vector<std::size_t> uncovered(s.options.size(), 0);
  for (const auto& w : enumerate_consistent_worlds(Knowledge{}, s.variables))
    for (std::size_t a = 0; a < s.options.size(); ++a)
      if (!s.outcome.match(w, s.options.name(a), s.variables)) ++uncovered[a];
  for (std::size_t a = 0; a < s.options.size(); ++a) {
    if (!uncovered[a]) continue;
    const std::string what = std::to_string(uncovered[a]) + " worlds have no outcome rule for '" +
                             s.options.name(a) + "'";
    if (s.outcome.missing == MissingTransition::SelfLoop)
      r.warning("/outcome", what + "; they keep the world unchanged");
    else
      r.warning("/outcome", what + "; reaching one is a model error");
  }
  return r;
}

inline Report validate_scenario(const Scenario& s) {
  Report r;
  r.merge(validate_variables(s.variables));
  r.merge(validate_credences(s.credences, s.variables));
  r.merge(validate_options(s.options));
  r.merge(validate_outcome(s.outcome, s.options, s.variables));
  r.merge(validate_utility(s.utility, s.variables));
  r.merge(validate_principles(s.principles, s.options, s.variables));
  r.merge(validate_engine(s.engine, s.principles));
  if (!r.has_errors()) r.merge(check_kernel_coverage(s));
  return r;
}

}  // namespace argdec
