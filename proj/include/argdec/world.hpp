#pragma once

// World states, partial knowledge and credences over finite-domain variables.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "argdec/core.hpp"

namespace argdec {

struct VariableSpec {
  std::string name;
  std::vector<Value> domain;

  bool is_integer() const {
    return !domain.empty() &&
           std::all_of(domain.begin(), domain.end(),
                       [](const Value& v) { return v.is_int(); });
  }
  std::optional<std::size_t> index_of(const Value& v) const {
    auto it = std::find(domain.begin(), domain.end(), v);
    if (it == domain.end()) return std::nullopt;
    return static_cast<std::size_t>(it - domain.begin());
  }
};

/// The declared variables of a scenario, in declaration order.
class VariableSet {
 public:
  VariableSet() = default;
  explicit VariableSet(std::vector<VariableSpec> specs) : specs_(std::move(specs)) {
    for (std::size_t i = 0; i < specs_.size(); ++i)
      index_.emplace(specs_[i].name, i);  // first declaration wins
  }

  std::size_t size() const { return specs_.size(); }
  const VariableSpec& operator[](std::size_t i) const { return specs_[i]; }
  const std::vector<VariableSpec>& specs() const { return specs_; }
  auto begin() const { return specs_.begin(); }
  auto end() const { return specs_.end(); }

  std::optional<std::size_t> find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  std::size_t index_of(const std::string& name) const {
    auto i = find(name);
    if (!i) throw ValidationError("unknown variable '" + name + "'");
    return *i;
  }

 private:
  std::vector<VariableSpec> specs_;
  std::unordered_map<std::string, std::size_t> index_;
};

inline Report validate_variables(const VariableSet& vars) {
  Report r;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const auto& v = vars[i];
    const std::string path = "/variables/" + std::to_string(i);
    if (v.name.empty()) r.error(path + "/name", "variable name is empty");
    if (!seen.insert(v.name).second)
      r.error(path + "/name", "duplicate variable name '" + v.name + "'");
    if (v.domain.empty())
      r.error(path + "/domain", "domain of '" + v.name + "' is empty");
    std::set<Value> values;
    for (std::size_t j = 0; j < v.domain.size(); ++j)
      if (!values.insert(v.domain[j]).second)
        r.error(path + "/domain/" + std::to_string(j),
                "duplicate value '" + v.domain[j].to_string() + "' in domain of '" +
                    v.name + "'");
  }
  return r;
}

/// A full assignment, stored as one domain index per declared variable.
struct WorldState {
  std::vector<std::size_t> values;

  friend bool operator==(const WorldState&, const WorldState&) = default;
  friend auto operator<=>(const WorldState&, const WorldState&) = default;
};

inline const Value& value_of(const WorldState& w, const VariableSet& vars,
                             std::size_t var) {
  return vars[var].domain[w.values[var]];
}

inline const Value& value_of(const WorldState& w, const VariableSet& vars,
                             const std::string& name) {
  return value_of(w, vars, vars.index_of(name));
}

inline WorldState make_world(const VariableSet& vars,
                             const std::map<std::string, Value>& assignment) {
  WorldState w;
  w.values.resize(vars.size());
  if (assignment.size() != vars.size())
    throw ValidationError("world assignment must cover all " +
                          std::to_string(vars.size()) + " variables");
  for (const auto& [name, value] : assignment) {
    const auto i = vars.index_of(name);
    auto idx = vars[i].index_of(value);
    if (!idx)
      throw ValidationError("value '" + value.to_string() +
                            "' outside the domain of '" + name + "'");
    w.values[i] = *idx;
  }
  return w;
}

inline std::string describe(const WorldState& w, const VariableSet& vars) {
  std::vector<std::string> parts;
  for (std::size_t i = 0; i < vars.size(); ++i)
    parts.push_back(vars[i].name + "=" + value_of(w, vars, i).to_string());
  return join(parts, ", ");
}

// ---------------------------------------------------------------------------
// Knowledge
// ---------------------------------------------------------------------------

/// What the agent knows: values for an arbitrary subset of the variables.
struct Knowledge {
  std::map<std::string, Value> known;

  friend bool operator==(const Knowledge&, const Knowledge&) = default;
};

/// Knowledge checked against a variable set: one optional index per variable.
using ResolvedKnowledge = std::vector<std::optional<std::size_t>>;

inline ResolvedKnowledge resolve(const Knowledge& k, const VariableSet& vars) {
  ResolvedKnowledge out(vars.size());
  for (const auto& [name, value] : k.known) {
    auto i = vars.find(name);
    if (!i) throw ValidationError("knowledge names unknown variable '" + name + "'");
    auto idx = vars[*i].index_of(value);
    if (!idx)
      throw ValidationError("knowledge value '" + value.to_string() +
                            "' outside the domain of '" + name + "'");
    out[*i] = *idx;
  }
  return out;
}

inline bool agrees(const WorldState& w, const ResolvedKnowledge& k) {
  for (std::size_t i = 0; i < k.size(); ++i)
    if (k[i] && w.values[i] != *k[i]) return false;
  return true;
}

inline bool agrees(const WorldState& w, const Knowledge& k, const VariableSet& vars) {
  return agrees(w, resolve(k, vars));
}

/// Knowledge that pins down every variable of `w`.
inline Knowledge full_knowledge(const WorldState& w, const VariableSet& vars) {
  Knowledge k;
  for (std::size_t i = 0; i < vars.size(); ++i)
    k.known.emplace(vars[i].name, value_of(w, vars, i));
  return k;
}

/// All full states consistent with `k`, lexicographic in declaration order
/// (first variable most significant).
inline std::vector<WorldState> enumerate_consistent_worlds(const Knowledge& k,
                                                           const VariableSet& vars) {
  const auto known = resolve(k, vars);
  std::vector<std::size_t> free;
  WorldState w;
  w.values.resize(vars.size());
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (vars[i].domain.empty())
      throw ValidationError("variable '" + vars[i].name + "' has an empty domain");
    if (known[i])
      w.values[i] = *known[i];
    else
      free.push_back(i);
  }

  std::vector<WorldState> out;
  for (;;) {
    out.push_back(w);
    // odometer over the free variables, last one fastest
    std::size_t pos = free.size();
    while (pos > 0) {
      const auto var = free[pos - 1];
      if (++w.values[var] < vars[var].domain.size()) break;
      w.values[var] = 0;
      --pos;
    }
    if (pos == 0) break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Credences
// ---------------------------------------------------------------------------

struct CredenceRow {
  std::vector<Value> given;      // one value per parent
  std::vector<double> probs;     // one entry per domain value of the variable
};

/// Conditional distribution of one variable given (possibly zero) parents.
struct CredenceTable {
  std::string variable;
  std::vector<std::string> parents;
  std::vector<CredenceRow> rows;
};

class CredenceModel {
 public:
  CredenceModel() = default;
  explicit CredenceModel(std::vector<CredenceTable> tables) : tables_(std::move(tables)) {
    for (std::size_t t = 0; t < tables_.size(); ++t) {
      by_variable_.emplace(tables_[t].variable, t);
      auto& idx = row_index_.emplace_back();
      for (std::size_t r = 0; r < tables_[t].rows.size(); ++r)
        idx.emplace(tables_[t].rows[r].given, r);
    }
  }

  const std::vector<CredenceTable>& tables() const { return tables_; }

  const CredenceTable* table_for(const std::string& variable) const {
    auto it = by_variable_.find(variable);
    return it == by_variable_.end() ? nullptr : &tables_[it->second];
  }

  /// Probability that variable `var` takes its value in `w`, given the values
  /// its parents take in `w`.
  double conditional(const WorldState& w, const VariableSet& vars,
                     std::size_t var) const {
    const auto& name = vars[var].name;
    auto it = by_variable_.find(name);
    if (it == by_variable_.end())
      throw ModelError("no credence table for unknown variable '" + name + "'");
    const auto& table = tables_[it->second];
    std::vector<Value> key;
    key.reserve(table.parents.size());
    for (const auto& p : table.parents) key.push_back(value_of(w, vars, p));
    const auto& idx = row_index_[it->second];
    auto row = idx.find(key);
    if (row == idx.end())
      throw ModelError("credence table for '" + name + "' has no row for the given parents");
    const auto& probs = table.rows[row->second].probs;
    if (w.values[var] >= probs.size())
      throw ModelError("credence row for '" + name + "' is too short");
    return probs[w.values[var]];
  }

 private:
  std::vector<CredenceTable> tables_;
  std::unordered_map<std::string, std::size_t> by_variable_;
  std::vector<std::map<std::vector<Value>, std::size_t>> row_index_;
};

/// P(w|k): product of the conditional entries of every variable `k` leaves
/// unknown. Tables of known variables are never consulted.
inline double world_probability(const WorldState& w, const Knowledge& k,
                                const CredenceModel& model, const VariableSet& vars) {
  const auto known = resolve(k, vars);
  if (w.values.size() != vars.size() || !agrees(w, known))
    throw ContractViolation("world is inconsistent with the knowledge");
  double p = 1.0;
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (!known[i]) p *= model.conditional(w, vars, i);
  return p;
}

/// Reports normalization, range, reference, coverage and cycle problems.
inline Report validate_credences(const CredenceModel& model, const VariableSet& vars) {
  Report r;
  std::map<std::string, std::size_t> first_table;
  const auto& tables = model.tables();

  for (std::size_t t = 0; t < tables.size(); ++t) {
    const auto& table = tables[t];
    const std::string path = "/credences/" + std::to_string(t);
    auto var = vars.find(table.variable);
    if (!var) {
      r.error(path + "/variable",
              "credence table names unknown variable '" + table.variable + "'");
      continue;
    }
    if (!first_table.emplace(table.variable, t).second)
      r.error(path + "/variable", "second credence table for '" + table.variable + "'");

    std::vector<std::optional<std::size_t>> parent_idx;
    bool parents_ok = true;
    for (std::size_t p = 0; p < table.parents.size(); ++p) {
      auto pi = vars.find(table.parents[p]);
      if (!pi) {
        r.error(path + "/given/" + std::to_string(p),
                "credence table for '" + table.variable + "' conditions on unknown variable '" +
                    table.parents[p] + "'");
        parents_ok = false;
      }
      parent_idx.push_back(pi);
    }

    const auto& domain = vars[*var].domain;
    std::set<std::vector<Value>> seen_rows;
    for (std::size_t ri = 0; ri < table.rows.size(); ++ri) {
      const auto& row = table.rows[ri];
      const std::string rpath = path + "/rows/" + std::to_string(ri);
      const std::string row_name = "row " + std::to_string(ri) + " of '" + table.variable + "'";
      if (row.given.size() != table.parents.size()) {
        r.error(rpath + "/given", row_name + " has " + std::to_string(row.given.size()) +
                                      " conditioning values, expected " +
                                      std::to_string(table.parents.size()));
      } else if (parents_ok) {
        for (std::size_t p = 0; p < row.given.size(); ++p)
          if (!vars[*parent_idx[p]].index_of(row.given[p]))
            r.error(rpath + "/given/" + std::to_string(p),
                    row_name + ": value '" + row.given[p].to_string() +
                        "' outside the domain of '" + table.parents[p] + "'");
      }
      if (!seen_rows.insert(row.given).second)
        r.error(rpath + "/given", row_name + " duplicates an earlier row");
      if (row.probs.size() != domain.size()) {
        r.error(rpath + "/p", row_name + " has " + std::to_string(row.probs.size()) +
                                  " probabilities, domain has " +
                                  std::to_string(domain.size()) + " values");
      }
      double sum = 0.0;
      bool range_ok = true;
      for (std::size_t j = 0; j < row.probs.size(); ++j) {
        const double p = row.probs[j];
        if (!(p >= 0.0 && p <= 1.0)) {
          r.error(rpath + "/p/" + std::to_string(j),
                  row_name + ": probability " + format_weight(p) + " outside [0,1]");
          range_ok = false;
        }
        sum += p;
      }
      if (range_ok && std::abs(sum - 1.0) > kTolerance)
        r.error(rpath + "/p", "distribution of '" + table.variable + "' in row " +
                                  std::to_string(ri) + " sums to " + format_weight(sum) +
                                  ", not 1");
    }

    // every combination of parent values must be covered
    if (parents_ok && !table.parents.empty()) {
      std::vector<std::size_t> odo(table.parents.size(), 0);
      std::size_t missing = 0;
      std::string example;
      for (;;) {
        std::vector<Value> key;
        for (std::size_t p = 0; p < odo.size(); ++p)
          key.push_back(vars[*parent_idx[p]].domain[odo[p]]);
        if (!seen_rows.count(key)) {
          if (missing++ == 0) {
            std::vector<std::string> s;
            for (const auto& v : key) s.push_back(v.to_string());
            example = "(" + join(s, ", ") + ")";
          }
        }
        std::size_t pos = odo.size();
        while (pos > 0) {
          if (++odo[pos - 1] < vars[*parent_idx[pos - 1]].domain.size()) break;
          odo[pos - 1] = 0;
          --pos;
        }
        if (pos == 0) break;
      }
      if (missing)
        r.error(path + "/rows", "credence table for '" + table.variable + "' lacks " +
                                    std::to_string(missing) +
                                    " parent combinations, e.g. " + example);
    } else if (table.parents.empty() && table.rows.empty()) {
      r.error(path + "/rows", "credence table for '" + table.variable + "' has no rows");
    }
  }

  for (std::size_t i = 0; i < vars.size(); ++i)
    if (!first_table.count(vars[i].name))
      r.warning("/variables/" + std::to_string(i),
                "no credence table for '" + vars[i].name + "'; it must always be known");

  // conditioning cycles (self-loops included)
  std::map<std::string, std::vector<std::string>> parents_of;
  for (const auto& [name, t] : first_table) parents_of[name] = tables[t].parents;
  std::map<std::string, int> state;  // 0 new, 1 on stack, 2 done
  std::vector<std::string> stack;
  std::set<std::string> reported;
  std::function<void(const std::string&)> visit = [&](const std::string& v) {
    state[v] = 1;
    stack.push_back(v);
    for (const auto& p : parents_of[v]) {
      if (state[p] == 1) {
        auto from = std::find(stack.begin(), stack.end(), p);
        std::vector<std::string> cycle(from, stack.end());
        cycle.push_back(p);
        auto key = *std::min_element(cycle.begin(), cycle.end() - 1);
        if (reported.insert(key).second)
          r.error("/credences/" + std::to_string(first_table[v]) + "/given",
                  "conditioning cycle: " + join(cycle, " <- "));
      } else if (state[p] == 0 && parents_of.count(p)) {
        visit(p);
      }
    }
    stack.pop_back();
    state[v] = 2;
  };
  for (const auto& [name, t] : first_table)
    if (state[name] == 0) visit(name);

  return r;
}

}  // namespace argdec
