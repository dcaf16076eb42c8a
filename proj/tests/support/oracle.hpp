#pragma once

// A from-scratch reference for the interlocked decision. Shares only the data
// types and the seeded pick with the library: worlds are assignments by name,
// conditions, table rows and outcome rules are interpreted here directly.

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "argdec/argdec.hpp"

namespace argdec::test_support::oracle {

using Assign = std::map<std::string, Value>;

inline bool holds(const Condition& c, const Assign& a) {
  switch (c.kind()) {
    case Condition::Kind::And: {
      bool all = true;
      for (const auto& ch : c.children()) all = all && holds(ch, a);
      return all;
    }
    case Condition::Kind::Or: {
      bool any = false;
      for (const auto& ch : c.children()) any = any || holds(ch, a);
      return any;
    }
    case Condition::Kind::Not:
      return !holds(c.children().at(0), a);
    case Condition::Kind::Atom: {
      const Value& v = a.at(c.variable());
      const Value& k = c.constant();
      switch (c.comparator()) {
        case Comparator::Eq: return v == k;
        case Comparator::Ne: return !(v == k);
        case Comparator::Lt: return v.as_int() < k.as_int();
        case Comparator::Le: return v.as_int() <= k.as_int();
        case Comparator::Gt: return v.as_int() > k.as_int();
        case Comparator::Ge: return v.as_int() >= k.as_int();
      }
    }
  }
  return false;
}

/// All full assignments agreeing with the knowledge, first variable slowest.
inline std::vector<Assign> worlds(const Scenario& s, const Knowledge& k) {
  std::vector<Assign> out{Assign{}};
  for (const auto& v : s.variables) {
    std::vector<Assign> next;
    for (const auto& partial : out) {
      auto known = k.known.find(v.name);
      for (const auto& value : v.domain) {
        if (known != k.known.end() && !(known->second == value)) continue;
        auto a = partial;
        a[v.name] = value;
        next.push_back(std::move(a));
      }
    }
    out = std::move(next);
  }
  return out;
}

/// Linear scan of the variable's table for the row matching its parents.
inline double conditional(const Scenario& s, const std::string& var, const Assign& a) {
  for (const auto& t : s.credences.tables()) {
    if (t.variable != var) continue;
    const auto& domain = s.variables[s.variables.index_of(var)].domain;
    std::size_t pos = 0;
    while (!(domain[pos] == a.at(var))) ++pos;
    for (const auto& row : t.rows) {
      bool match = true;
      for (std::size_t j = 0; j < t.parents.size(); ++j) match = match && row.given[j] == a.at(t.parents[j]);
      if (match) return row.probs[pos];
    }
  }
  throw std::runtime_error("oracle: no credence for " + var);
}

inline double probability(const Scenario& s, const Knowledge& k, const Assign& a) {
  double p = 1.0;
  for (const auto& v : s.variables)
    if (!k.known.count(v.name)) p *= conditional(s, v.name, a);
  return p;
}

inline double utility(const Scenario& s, const Assign& a) {
  for (const auto& r : s.utility.rules)
    if (holds(r.when, a)) return r.value;
  throw std::runtime_error("oracle: utility undefined");
}

inline double expected_utility(const Scenario& s, const Knowledge& k, const std::string& option) {
  double eu = 0.0;
  for (const auto& src : worlds(s, k)) {
    const double p = probability(s, k, src);
    if (p == 0.0) continue;
    const OutcomeRule* rule = nullptr;
    for (const auto& r : s.outcome.rules)
      if (!rule && r.option == option && holds(r.when, src)) rule = &r;
    if (!rule) {
      eu += p * utility(s, src);
      continue;
    }
    for (const auto& e : rule->effects) {
      auto dst = src;
      for (const auto& [name, value] : e.set) dst[name] = value;
      for (const auto& [name, delta] : e.add) dst[name] = Value(dst[name].as_int() + delta);
      eu += p * e.probability * utility(s, dst);
    }
  }
  return eu;
}

/// Options in the first class of a principle's structure (all options when
/// the structure mentions none).
inline std::vector<std::string> top_class(const Principle& p, const Scenario& s) {
  if (p.structure.classes.empty()) return s.options.names();
  std::vector<std::string> out;
  for (const auto& o : s.options.names())
    for (const auto& m : p.structure.classes.front())
      if (m == o) out.push_back(o);
  return out;
}

struct Result {
  std::vector<std::string> candidates;                // options with support, declaration order
  std::map<std::string, std::vector<double>> force;   // per candidate
  std::map<std::string, std::size_t> support;         // number of supporting case arguments
  std::map<std::string, double> eu;
  std::vector<std::string> argmax;
  std::string chosen;
  std::size_t case_arguments = 0;
  bool fallback = false;
};

inline int compare_tiers(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i] + tol) return 1;
    if (b[i] > a[i] + tol) return -1;
  }
  return 0;
}

/// Enumerates every (world, principle, option) triple.
inline Result decide(const Scenario& s, const Knowledge& k, std::uint64_t seed, const EngineConfig& cfg) {
  const bool lex = cfg.relevance.mode == RelevanceMode::Lexicographic;
  const std::size_t t = s.principles.classes.size();
  const std::size_t width = lex ? t : 1;

  auto weight = [&](std::size_t cls) {
    std::vector<double> w(width, 0.0);
    if (lex)
      w[cls] = 1.0;
    else if (!cfg.relevance.weights.empty())
      w[0] = cfg.relevance.weights[cls];
    else
      w[0] = std::pow(cfg.relevance.base, static_cast<double>(t - cls));
    return w;
  };

  Result r;
  for (const auto& o : s.options.names()) r.force[o] = std::vector<double>(width, 0.0);
  for (const auto& w : worlds(s, k)) {
    const double p = probability(s, k, w);
    if (p == 0.0) continue;
    for (std::size_t cls = 0; cls < t; ++cls)
      for (const auto& psi : s.principles.classes[cls]) {
        if (!holds(psi.condition, w)) continue;
        ++r.case_arguments;
        const auto rel = weight(cls);
        for (const auto& o : top_class(psi, s)) {
          for (std::size_t i = 0; i < width; ++i) r.force[o][i] += rel[i] * p;
          ++r.support[o];
        }
      }
  }
  for (const auto& o : s.options.names()) {
    r.eu[o] = expected_utility(s, k, o);
    if (r.support.count(o)) r.candidates.push_back(o);
  }
  r.fallback = r.candidates.empty();

  std::vector<std::string> pool = r.fallback ? s.options.names() : r.candidates;
  std::vector<std::vector<double>> scores;
  for (const auto& o : pool) {
    auto sc = r.fallback ? std::vector<double>(width, 0.0) : r.force[o];
    if (lex)
      sc.push_back(cfg.eu_weight * r.eu[o]);
    else
      sc[0] += cfg.eu_weight * r.eu[o];
    if (r.fallback) sc = {r.eu[o]};
    scores.push_back(sc);
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < pool.size(); ++i)
    if (compare_tiers(scores[i], scores[best], 0.0) > 0) best = i;
  for (std::size_t i = 0; i < pool.size(); ++i)
    if (compare_tiers(scores[i], scores[best], cfg.tolerance) == 0) r.argmax.push_back(pool[i]);
  r.chosen = r.argmax[pick_index(seed, r.argmax.size())];
  return r;
}

}  // namespace argdec::test_support::oracle
