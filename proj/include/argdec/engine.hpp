#pragma once

// The three-layer argumentation graph (case distinction, reason aggregation,
// final action determination), the interlocked decision it yields, and the
// sequential filter-then-maximize pipeline for the perfect-knowledge case.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "argdec/core.hpp"
#include "argdec/deontic.hpp"
#include "argdec/instrumental.hpp"
#include "argdec/random.hpp"
#include "argdec/scenario.hpp"
#include "argdec/world.hpp"

namespace argdec {

// ---------------------------------------------------------------------------
// Strength
// ---------------------------------------------------------------------------

/// The strength of a reason. Archimedean relevance gives one component;
/// lexicographic relevance gives one component per principle class (highest
/// first), and combined scores append EU as the lowest tier.
struct Strength {
  std::vector<double> tiers;

  static Strength scalar(double x) { return {{x}}; }
  static Strength zero(std::size_t width) { return {std::vector<double>(width, 0.0)}; }

  bool is_scalar() const { return tiers.size() == 1; }
  double value() const { return tiers.at(0); }

  Strength& operator+=(const Strength& o) {
    if (tiers.size() < o.tiers.size()) tiers.resize(o.tiers.size(), 0.0);
    for (std::size_t i = 0; i < o.tiers.size(); ++i) tiers[i] += o.tiers[i];
    return *this;
  }
  friend Strength operator+(Strength a, const Strength& b) { return a += b; }
  friend Strength operator*(Strength a, double k) {
    for (auto& t : a.tiers) t *= k;
    return a;
  }

  friend bool operator==(const Strength&, const Strength&) = default;
};

/// Lexicographic comparison; components within `tolerance` count as equal.
inline int compare(const Strength& a, const Strength& b, double tolerance = kTolerance) {
  const auto n = std::max(a.tiers.size(), b.tiers.size());
  for (std::size_t i = 0; i < n; ++i) {
    const double x = i < a.tiers.size() ? a.tiers[i] : 0.0;
    const double y = i < b.tiers.size() ? b.tiers[i] : 0.0;
    if (x > y + tolerance) return 1;
    if (y > x + tolerance) return -1;
  }
  return 0;
}

/// Exact lexicographic maximum, then every entry within tolerance of it.
inline std::vector<std::size_t> argmax_indices(const std::vector<Strength>& scores,
                                               double tolerance = kTolerance) {
  std::vector<std::size_t> out;
  if (scores.empty()) return out;
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i)
    if (compare(scores[i], scores[best], 0.0) > 0) best = i;
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (compare(scores[i], scores[best], tolerance) == 0) out.push_back(i);
  return out;
}

inline std::string display(const Strength& s) {
  if (s.is_scalar()) return format_display(s.value());
  std::vector<std::string> parts;
  for (double t : s.tiers) parts.push_back(format_display(t));
  return "(" + join(parts, ", ") + ")";
}

// ---------------------------------------------------------------------------
// Relevance
// ---------------------------------------------------------------------------

inline const char* to_string(RelevanceMode m) {
  return m == RelevanceMode::Archimedean ? "archimedean" : "lexicographic";
}

/// relevance: principle class -> weight, equal within a class and strictly
/// larger for higher classes.
class RelevanceFunction {
 public:
  /// Weight base^(t - rank + 1) for 1-based rank among t classes.
  static RelevanceFunction archimedean(double base, std::size_t classes) {
    if (!(base > 1.0)) throw ValidationError("relevance base must exceed 1");
    std::vector<double> w(classes);
    for (std::size_t r = 0; r < classes; ++r)
      w[r] = std::pow(base, static_cast<double>(classes - r));
    return RelevanceFunction(RelevanceMode::Archimedean, std::move(w));
  }

  static RelevanceFunction explicit_weights(std::vector<double> weights) {
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (!(weights[i] > 0.0)) throw ValidationError("relevance weights must be positive");
      if (i > 0 && !(weights[i] < weights[i - 1]))
        throw ValidationError("relevance weights must strictly decrease");
    }
    return RelevanceFunction(RelevanceMode::Archimedean, std::move(weights));
  }

  static RelevanceFunction lexicographic(std::size_t classes) {
    return RelevanceFunction(RelevanceMode::Lexicographic, std::vector<double>(classes, 1.0));
  }

  static RelevanceFunction from_config(const RelevanceConfig& cfg, std::size_t classes) {
    if (cfg.mode == RelevanceMode::Lexicographic) return lexicographic(classes);
    if (cfg.weights.empty()) return archimedean(cfg.base, classes);
    if (cfg.weights.size() != classes)
      throw ValidationError("relevance weight count does not match the principle classes");
    return explicit_weights(cfg.weights);
  }

  RelevanceMode mode() const { return mode_; }
  std::size_t classes() const { return weights_.size(); }
  const std::vector<double>& weights() const { return weights_; }

  /// Relevance of a principle in class `rank` (0-based, 0 highest).
  Strength of_rank(std::size_t rank) const {
    if (mode_ == RelevanceMode::Archimedean) return Strength::scalar(weights_.at(rank));
    Strength s = Strength::zero(weights_.size());
    s.tiers.at(rank) = weights_[rank];
    return s;
  }

  Strength zero() const {
    return mode_ == RelevanceMode::Archimedean ? Strength::scalar(0.0)
                                               : Strength::zero(weights_.size());
  }

  RelevanceFunction scaled(double factor) const {
    auto w = weights_;
    for (auto& x : w) x *= factor;
    return RelevanceFunction(mode_, std::move(w));
  }

 private:
  RelevanceFunction(RelevanceMode mode, std::vector<double> weights)
      : mode_(mode), weights_(std::move(weights)) {}

  RelevanceMode mode_;
  std::vector<double> weights_;
};

/// Smallest base strictly above which an archimedean ladder makes the
/// interlocked choice under full knowledge fall inside the union of the
/// permitted sets of the top applicable principles: B > m + eu_weight * spread,
/// with m the number of principles and spread = max EU - min EU.
inline double archimedean_base_bound(std::size_t num_principles, double weighted_eu_spread) {
  return static_cast<double>(num_principles) + weighted_eu_spread;
}

// ---------------------------------------------------------------------------
// Graph
// ---------------------------------------------------------------------------

/// One premise or conclusion line: a label such as "P_w", a symbolic form and
/// the display sentence.
struct Premise {
  std::string label;
  std::string symbolic;
  std::string text;

  friend bool operator==(const Premise&, const Premise&) = default;
};

using Assignment = std::vector<std::pair<std::string, Value>>;

/// Arg_psi^w: "if w obtains, principle psi permits Perm^psi(A, w)".
struct CaseArgument {
  std::string id;
  Assignment world;
  double probability = 0.0;     // P(w|k)
  std::string principle_id;
  std::size_t principle_rank = 1;  // 1 = highest class
  Strength relevance;
  std::vector<std::string> perm_set;
  std::vector<Premise> premises;  // P_w, P_psi, P_Perm
  Premise conclusion;
};

struct SupportEntry {
  std::string case_id;
  Strength force;  // pro tanto
};

/// Arg_a: the aggregated strength of every case argument permitting `option`.
struct OptionArgument {
  std::string id;
  std::string option;
  std::vector<SupportEntry> support;
  Strength strength;  // force_overall(a)
  std::vector<Premise> premises;  // one per supporter, then P_sum
  Premise conclusion;
};

struct FinalEntry {
  std::string option;
  Strength force;
  double expected_utility = 0.0;
  Strength score;
};

/// Arg_dec: perform one randomly picked option among the maximal combined scores.
struct FinalArgument {
  std::string id = "dec";
  std::vector<FinalEntry> entries;
  std::string chosen;
  std::vector<std::string> tie_set;
  std::uint64_t seed = 0;
  std::vector<Premise> premises;  // one per candidate, then P_max
  Premise conclusion;
};

struct Edge {
  std::string from;
  std::string to;
  Strength weight;
};

struct Provenance {
  std::string scenario;
  Knowledge knowledge;
  std::string timestamp;  // caller-supplied; empty keeps output reproducible
  EngineConfig config;
  std::vector<double> relevance_weights;
  std::vector<std::string> options;
  bool fallback = false;  // no principle applies in any possible case
};

struct ArgumentationGraph {
  std::vector<CaseArgument> v1;
  std::vector<OptionArgument> v2;
  FinalArgument v3;
  std::vector<Edge> e12;
  std::vector<Edge> e23;
  Provenance provenance;
};

// ---------------------------------------------------------------------------
// Premise text
// ---------------------------------------------------------------------------

namespace detail {

inline std::string braces(const std::vector<std::string>& names) {
  return "{" + join(names, ", ") + "}";
}

inline std::string describe(const Assignment& a) {
  std::vector<std::string> parts;
  for (const auto& [name, value] : a) parts.push_back(name + "=" + value.to_string());
  return "<" + join(parts, ", ") + ">";
}

inline std::string describe(const OptionStructure& s) {
  if (s.classes.empty()) return "all options equally";
  std::vector<std::string> parts;
  for (const auto& cls : s.classes) parts.push_back(braces(cls));
  parts.push_back("rest");
  return join(parts, " > ");
}

inline Assignment assignment_of(const WorldState& w, const VariableSet& vars) {
  Assignment a;
  for (std::size_t i = 0; i < vars.size(); ++i) a.emplace_back(vars[i].name, value_of(w, vars, i));
  return a;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Step 1: case distinction
// ---------------------------------------------------------------------------

/// One argument per (w in W_k with P(w|k) > 0, psi applying in w), ordered by
/// world, then class rank, then principle id.
inline std::vector<CaseArgument> build_case_layer(const Knowledge& k, const Scenario& s,
                                                  const RelevanceFunction& relevance) {
  std::vector<CaseArgument> layer;
  for (const auto& w : enumerate_consistent_worlds(k, s.variables)) {
    const double p = world_probability(w, k, s.credences, s.variables);
    if (p == 0.0) continue;
    const auto app = applicable_principles(s.principles, w, s.variables);
    for (const auto& rp : app.all) {
      CaseArgument arg;
      arg.id = "c" + std::to_string(layer.size());
      arg.world = detail::assignment_of(w, s.variables);
      arg.probability = p;
      arg.principle_id = rp.id();
      arg.principle_rank = rp.rank + 1;
      arg.relevance = relevance.of_rank(rp.rank);
      arg.perm_set =
          s.options.names_of(permissible_per_principle(*rp.principle, s.options, w, s.variables));

      const auto world_text = detail::describe(arg.world);
      const auto cond_text = rp.principle->condition.to_string();
      const auto order_text = detail::describe(rp.principle->structure);
      const auto perm_text = detail::braces(arg.perm_set);
      arg.premises = {
          {"P_w", "w = " + world_text,
           "The case " + world_text + " obtains (P(w|k) = " + format_display(p) + ")."},
          {"P_psi", "if " + cond_text + " then " + order_text,
           "Principle " + arg.principle_id + " (class " + std::to_string(arg.principle_rank) +
               "): if " + cond_text + ", then " + order_text + "."},
          {"P_Perm", "if " + order_text + " then Perm = " + perm_text,
           "If " + order_text + ", then the permissible options are " + perm_text + "."},
      };
      arg.conclusion = {"C", "Perm^" + arg.principle_id + "(A,w) = " + perm_text,
                        "Thus: " + perm_text + " is permissible according to " +
                            arg.principle_id + " in this case."};
      layer.push_back(std::move(arg));
    }
  }
  return layer;
}

/// force_pro_tanto = P(w|k) * relevance(psi)
inline Strength pro_tanto_force(const CaseArgument& arg) { return arg.relevance * arg.probability; }

// ---------------------------------------------------------------------------
// Step 2: reason aggregation
// ---------------------------------------------------------------------------

/// One argument per option some case argument permits (declaration order);
/// its strength is the plain sum of its supporters' pro tanto forces.
inline std::vector<OptionArgument> build_aggregation_layer(const std::vector<CaseArgument>& v1,
                                                           const OptionSet& options,
                                                           const RelevanceFunction& relevance) {
  std::vector<OptionArgument> layer;
  for (OptionId a = 0; a < options.size(); ++a) {
    const auto& name = options.name(a);
    OptionArgument arg;
    arg.id = "a:" + name;
    arg.option = name;
    arg.strength = relevance.zero();
    for (const auto& c : v1) {
      if (std::find(c.perm_set.begin(), c.perm_set.end(), name) == c.perm_set.end()) continue;
      const auto f = pro_tanto_force(c);
      arg.support.push_back({c.id, f});
      arg.strength += f;
    }
    if (arg.support.empty()) continue;

    for (std::size_t i = 0; i < arg.support.size(); ++i) {
      const auto r = "r_" + std::to_string(i + 1);
      const auto& sup = arg.support[i];
      arg.premises.push_back(
          {"P_" + std::to_string(i + 1), r + " = " + sup.case_id + ", " + display(sup.force),
           "There is a reason " + r + " (from " + sup.case_id + ") with strength " +
               display(sup.force) + " for " + name + "."});
    }
    arg.premises.push_back(
        {"P_sum", "sum",
         "For any number of reasons u: if there are some reasons r_1, ..., r_u supporting the "
         "same option a with strengths f_1, ..., f_u, then there is an overall reason "
         "supporting a with strength f_1 + ... + f_u."});
    arg.conclusion = {"C", "force_overall(" + name + ") = " + display(arg.strength),
                      "Thus: there is an overall reason supporting " + name +
                          " with strength " + display(arg.strength) + "."};
    layer.push_back(std::move(arg));
  }
  return layer;
}

// ---------------------------------------------------------------------------
// Step 3: final action determination
// ---------------------------------------------------------------------------

struct Decision {
  std::string option;
  ArgumentationGraph graph;
};

inline Decision decide(const Knowledge& k, const Scenario& s, std::uint64_t seed,
                       const EngineConfig& config, std::string timestamp = {}) {
  if (s.options.empty()) throw ValidationError("scenario declares no options");
  resolve(k, s.variables);

  const auto relevance = RelevanceFunction::from_config(config.relevance, s.principles.classes.size());
  const bool lexicographic = relevance.mode() == RelevanceMode::Lexicographic;

  ArgumentationGraph g;
  g.v1 = build_case_layer(k, s, relevance);
  g.v2 = build_aggregation_layer(g.v1, s.options, relevance);
  for (const auto& opt : g.v2)
    for (const auto& sup : opt.support) g.e12.push_back({sup.case_id, opt.id, sup.force});

  g.provenance.scenario = s.name;
  g.provenance.knowledge = k;
  g.provenance.timestamp = std::move(timestamp);
  g.provenance.config = config;
  g.provenance.relevance_weights = relevance.weights();
  g.provenance.options = s.options.names();
  g.provenance.fallback = g.v1.empty();

  auto& fin = g.v3;
  fin.seed = seed;
  auto score_of = [&](const Strength& force, double eu) {
    Strength score = force;
    if (lexicographic)
      score.tiers.push_back(config.eu_weight * eu);
    else
      score.tiers.at(0) += config.eu_weight * eu;
    return score;
  };

  auto eu_of = [&](const std::string& option) {
    return expected_utility(option, k, s.variables, s.credences, s.outcome, s.utility);
  };

  if (!g.provenance.fallback) {
    for (const auto& opt : g.v2) {
      const double eu = eu_of(opt.option);
      fin.entries.push_back({opt.option, opt.strength, eu, score_of(opt.strength, eu)});
      g.e23.push_back({opt.id, fin.id, opt.strength});
    }
    std::vector<Strength> scores;
    for (const auto& e : fin.entries) scores.push_back(e.score);
    for (auto i : argmax_indices(scores, config.tolerance))
      fin.tie_set.push_back(fin.entries[i].option);
  } else {
    // nothing permits anything: plain instrumental choice over all options
    std::vector<double> eus(s.options.size());
    for (OptionId a = 0; a < s.options.size(); ++a) {
      eus[a] = eu_of(s.options.name(a));
      fin.entries.push_back(
          {s.options.name(a), relevance.zero(), eus[a], score_of(relevance.zero(), eus[a])});
    }
    fin.tie_set = s.options.names_of(argmax_within(s.options.all(), eus, config.tolerance));
  }
  fin.chosen = fin.tie_set[pick_index(seed, fin.tie_set.size())];

  const bool weighted = config.eu_weight != 1.0;
  const std::string eu_term = weighted ? format_display(config.eu_weight) + " * EU(a|k)" : "EU(a|k)";
  std::vector<std::string> candidates;
  std::vector<std::string> scores_text;
  for (const auto& e : fin.entries) {
    candidates.push_back(e.option);
    if (!g.provenance.fallback)
      fin.premises.push_back({"P_" + e.option, "force_overall(" + e.option + ") = " + display(e.force),
                              "There is an overall reason supporting " + e.option +
                                  " with strength " + display(e.force) + "."});
    scores_text.push_back(e.option + ": " + display(e.force) + " + " +
                          (weighted ? format_display(config.eu_weight) + " * " : "") +
                          format_display(e.expected_utility) + " = " + display(e.score));
  }
  const std::string ties = detail::braces(fin.tie_set);
  if (!g.provenance.fallback) {
    fin.premises.push_back(
        {"P_max",
         "a_out in argmax_{a in " + detail::braces(candidates) + "} force_overall(a) + " + eu_term,
         "Perform one randomly picked option a_out of those in argmax over " +
             detail::braces(candidates) + " of force_overall(a) + " + eu_term +
             (lexicographic ? " (compared class by class, EU last)" : "") + " [" +
             join(scores_text, "; ") + "]; the maximum is attained by " + ties + "."});
  } else {
    fin.premises.push_back(
        {"P_max", "a_out in argmax_{a in A} EU(a|k)",
         "No principle applies in any possible case; perform one randomly picked option "
         "a_out of those in argmax over " +
             detail::braces(candidates) + " of EU(a|k) [" + join(scores_text, "; ") +
             "]; the maximum is attained by " + ties + "."});
  }
  fin.conclusion = {"C_final", "a_out = " + fin.chosen, "Thus: perform " + fin.chosen + "."};

  return {fin.chosen, std::move(g)};
}

inline Decision decide(const Knowledge& k, const Scenario& s, std::uint64_t seed) {
  return decide(k, s, seed, s.engine);
}

/// Filter on the true world, maximize EU among the survivors, pick.
inline std::string sequential_decide(const WorldState& world, const Knowledge& k,
                                     const Scenario& s, std::uint64_t seed) {
  if (world.values.size() != s.variables.size() || !agrees(world, resolve(k, s.variables)))
    throw ContractViolation("sequential decision needs a full world consistent with the knowledge");
  const auto permitted = deontic_filter(s.principles, s.options, world, s.variables,
                                        s.engine.dilemma_policy);
  const auto choice = instrumental_choice(permitted, k, s);
  return s.options.name(choice[pick_index(seed, choice.size())]);
}

/// Pure means-end choice: EU argmax over every option, then pick.
inline std::string instrumental_decide(const Knowledge& k, const Scenario& s, std::uint64_t seed) {
  const auto choice = instrumental_choice(s.options.all(), k, s);
  return s.options.name(choice[pick_index(seed, choice.size())]);
}

}  // namespace argdec
