#pragma once

// Outcome distributions under partial knowledge, expected utility and the
// instrumental argmax.

#include <algorithm>
#include <iterator>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "argdec/condition.hpp"
#include "argdec/core.hpp"
#include "argdec/world.hpp"

namespace argdec {

/// Index into an OptionSet.
using OptionId = std::size_t;

/// A set of options as sorted, duplicate-free indices (declaration order).
using OptionSubset = std::vector<OptionId>;

class OptionSet {
 public:
  OptionSet() = default;
  OptionSet(std::initializer_list<std::string> names) : OptionSet(std::vector<std::string>(names)) {}
  explicit OptionSet(std::vector<std::string> names) : names_(std::move(names)) {
    for (std::size_t i = 0; i < names_.size(); ++i) index_.emplace(names_[i], i);
  }

  std::size_t size() const { return names_.size(); }
  bool empty() const { return names_.empty(); }
  const std::string& name(OptionId id) const { return names_.at(id); }
  const std::vector<std::string>& names() const { return names_; }

  std::optional<OptionId> find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  OptionId id(const std::string& name) const {
    auto i = find(name);
    if (!i) throw ValidationError("unknown option '" + name + "'");
    return *i;
  }

  OptionSubset all() const {
    OptionSubset s(names_.size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = i;
    return s;
  }

  std::vector<std::string> names_of(const OptionSubset& s) const {
    std::vector<std::string> out;
    for (auto id : s) out.push_back(name(id));
    return out;
  }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, OptionId> index_;
};

inline Report validate_options(const OptionSet& options) {
  Report r;
  if (options.empty()) r.error("/options", "option set is empty");
  std::set<std::string> seen;
  for (std::size_t i = 0; i < options.size(); ++i)
    if (!seen.insert(options.name(i)).second)
      r.error("/options/" + std::to_string(i), "duplicate option '" + options.name(i) + "'");
  return r;
}

inline OptionSubset subset_union(const OptionSubset& a, const OptionSubset& b) {
  OptionSubset out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline OptionSubset subset_intersection(const OptionSubset& a, const OptionSubset& b) {
  OptionSubset out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline bool subset_contains(const OptionSubset& s, OptionId id) {
  return std::binary_search(s.begin(), s.end(), id);
}

// ---------------------------------------------------------------------------
// Outcome kernel
// ---------------------------------------------------------------------------

/// One possible successor: assignments applied to the source world.
struct Effect {
  double probability = 1.0;
  std::map<std::string, Value> set;
  std::map<std::string, std::int64_t> add;  // integer variables only

  friend bool operator==(const Effect&, const Effect&) = default;
};

/// For worlds satisfying `when`, performing `option` yields `effects`.
struct OutcomeRule {
  std::string option;
  Condition when;
  std::vector<Effect> effects;

  friend bool operator==(const OutcomeRule&, const OutcomeRule&) = default;
};

enum class MissingTransition { SelfLoop, Error };

/// Outcome(w, a, w'): rules are matched first-wins per (world, option). A pair
/// no rule covers either keeps the world unchanged or is a model error.
struct OutcomeModel {
  std::vector<OutcomeRule> rules;
  MissingTransition missing = MissingTransition::SelfLoop;

  const OutcomeRule* match(const WorldState& w, const std::string& option,
                           const VariableSet& vars) const {
    for (const auto& rule : rules)
      if (rule.option == option && rule.when.evaluate(w, vars)) return &rule;
    return nullptr;
  }

  std::vector<std::pair<WorldState, double>> successors(const WorldState& w,
                                                        const std::string& option,
                                                        const VariableSet& vars) const {
    const auto* rule = match(w, option, vars);
    if (!rule) {
      if (missing == MissingTransition::Error)
        throw ModelError("outcome model has no entry for option '" + option +
                         "' in world <" + describe(w, vars) + ">");
      return {{w, 1.0}};
    }
    std::vector<std::pair<WorldState, double>> out;
    out.reserve(rule->effects.size());
    for (const auto& e : rule->effects) out.emplace_back(apply(w, e, vars), e.probability);
    return out;
  }

  static WorldState apply(WorldState w, const Effect& e, const VariableSet& vars) {
    for (const auto& [name, value] : e.set) {
      const auto i = vars.index_of(name);
      auto idx = vars[i].index_of(value);
      if (!idx)
        throw ModelError("effect sets '" + name + "' to '" + value.to_string() +
                         "', outside its domain");
      w.values[i] = *idx;
    }
    for (const auto& [name, delta] : e.add) {
      const auto i = vars.index_of(name);
      const auto& cur = vars[i].domain[w.values[i]];
      if (!cur.is_int()) throw ModelError("effect adds to non-integer variable '" + name + "'");
      const Value next(cur.as_int() + delta);
      auto idx = vars[i].index_of(next);
      if (!idx)
        throw ModelError("effect moves '" + name + "' to " + next.to_string() +
                         ", outside its domain");
      w.values[i] = *idx;
    }
    return w;
  }
};

// ---------------------------------------------------------------------------
// Utility
// ---------------------------------------------------------------------------

struct UtilityRule {
  Condition when;
  double value = 0.0;

  friend bool operator==(const UtilityRule&, const UtilityRule&) = default;
};

/// U(w): the value of the first rule whose condition holds.
struct UtilityFunction {
  std::vector<UtilityRule> rules;

  double operator()(const WorldState& w, const VariableSet& vars) const {
    for (const auto& r : rules)
      if (r.when.evaluate(w, vars)) return r.value;
    throw ModelError("utility is undefined for world <" + describe(w, vars) + ">");
  }

  static UtilityFunction constant(double c) { return {{{Condition::always(), c}}}; }
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// The full distribution Outcome_P(k, a, .) over successor states. Sources
/// with zero credence contribute nothing and are not expanded.
inline std::map<WorldState, double> outcome_distribution(const Knowledge& k,
                                                         const std::string& option,
                                                         const VariableSet& vars,
                                                         const CredenceModel& credences,
                                                         const OutcomeModel& outcome) {
  std::map<WorldState, double> dist;
  for (const auto& src : enumerate_consistent_worlds(k, vars)) {
    const double p = world_probability(src, k, credences, vars);
    if (p == 0.0) continue;
    for (const auto& [succ, q] : outcome.successors(src, option, vars)) dist[succ] += p * q;
  }
  return dist;
}

/// Outcome_P(k, a, target) = sum over w' in W_k of P(w'|k) * Outcome(w', a, target)
inline double outcome_given_knowledge(const Knowledge& k, const std::string& option,
                                      const WorldState& target, const VariableSet& vars,
                                      const CredenceModel& credences,
                                      const OutcomeModel& outcome) {
  double total = 0.0;
  for (const auto& src : enumerate_consistent_worlds(k, vars)) {
    const double p = world_probability(src, k, credences, vars);
    if (p == 0.0) continue;
    for (const auto& [succ, q] : outcome.successors(src, option, vars))
      if (succ == target) total += p * q;
  }
  return total;
}

/// EU(a|k) = sum over w of Outcome_P(k, a, w) * U(w)
inline double expected_utility(const std::string& option, const Knowledge& k,
                               const VariableSet& vars, const CredenceModel& credences,
                               const OutcomeModel& outcome, const UtilityFunction& utility) {
  double eu = 0.0;
  for (const auto& [w, p] : outcome_distribution(k, option, vars, credences, outcome))
    eu += p * utility(w, vars);
  return eu;
}

/// Indices attaining the maximum of `values` (restricted to `candidates`)
/// within the absolute tolerance.
inline OptionSubset argmax_within(const OptionSubset& candidates,
                                  const std::vector<double>& values,
                                  double tolerance = kTolerance) {
  double best = -std::numeric_limits<double>::infinity();
  for (auto id : candidates) best = std::max(best, values[id]);
  OptionSubset out;
  for (auto id : candidates)
    if (values[id] >= best - tolerance) out.push_back(id);
  return out;
}

/// dec_inst: every candidate whose expected utility is maximal. Ties are kept.
inline OptionSubset instrumental_choice(const OptionSubset& candidates, const Knowledge& k,
                                        const OptionSet& options, const VariableSet& vars,
                                        const CredenceModel& credences,
                                        const OutcomeModel& outcome,
                                        const UtilityFunction& utility) {
  if (candidates.empty()) throw ValidationError("instrumental choice over no options");
  std::vector<double> eu(options.size(), 0.0);
  for (auto id : candidates)
    eu[id] = expected_utility(options.name(id), k, vars, credences, outcome, utility);
  return argmax_within(candidates, eu);
}

}  // namespace argdec
