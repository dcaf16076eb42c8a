#pragma once

// Principles as condition -> option-structure conditionals, ranked in a
// principle structure, and the perfect-knowledge deontic filter.

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "argdec/condition.hpp"
#include "argdec/core.hpp"
#include "argdec/instrumental.hpp"
#include "argdec/world.hpp"

namespace argdec {

/// A principle's permissibility preorder over options, best class first.
/// Options no class mentions share an implicit bottom class.
struct OptionStructure {
  std::vector<std::vector<std::string>> classes;

  friend bool operator==(const OptionStructure&, const OptionStructure&) = default;
};

struct Principle {
  std::string id;
  Condition condition;
  OptionStructure structure;

  friend bool operator==(const Principle&, const Principle&) = default;
};

/// Ranked equivalence classes of principles; classes[0] is the highest.
struct PrincipleStructure {
  std::vector<std::vector<Principle>> classes;

  std::size_t size() const {
    std::size_t n = 0;
    for (const auto& c : classes) n += c.size();
    return n;
  }
  bool empty() const { return size() == 0; }

  friend bool operator==(const PrincipleStructure&, const PrincipleStructure&) = default;
};

/// A principle together with the (0-based) rank of its class.
struct RankedPrinciple {
  std::size_t rank = 0;
  const Principle* principle = nullptr;

  const std::string& id() const { return principle->id; }
};

enum class DilemmaPolicy { Error, Union, PassThrough };

inline const char* to_string(DilemmaPolicy p) {
  switch (p) {
    case DilemmaPolicy::Error: return "error";
    case DilemmaPolicy::Union: return "union";
    case DilemmaPolicy::PassThrough: return "pass-through";
  }
  return "?";
}

inline std::optional<DilemmaPolicy> parse_dilemma_policy(const std::string& s) {
  if (s == "error") return DilemmaPolicy::Error;
  if (s == "union") return DilemmaPolicy::Union;
  if (s == "pass-through") return DilemmaPolicy::PassThrough;
  return std::nullopt;
}

inline bool applies(const Principle& p, const WorldState& w, const VariableSet& vars) {
  return p.condition.evaluate(w, vars);
}

/// Topmost class of the option structure, restricted to `options`. Never empty.
inline OptionSubset top_class(const OptionStructure& s, const OptionSet& options) {
  for (const auto& cls : s.classes) {
    OptionSubset out;
    for (const auto& name : cls)
      if (auto id = options.find(name)) out.push_back(*id);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (!out.empty()) return out;
  }
  return options.all();
}

/// Perm^psi(A, w). Only defined where the principle applies.
inline OptionSubset permissible_per_principle(const Principle& p, const OptionSet& options,
                                              const WorldState& w, const VariableSet& vars) {
  if (!applies(p, w, vars))
    throw ContractViolation("principle '" + p.id + "' does not apply in <" +
                            describe(w, vars) + ">");
  return top_class(p.structure, options);
}

struct ApplicablePrinciples {
  std::vector<RankedPrinciple> all;         // P^w, by rank then id
  std::vector<RankedPrinciple> max_ranked;  // P^w_max
};

inline ApplicablePrinciples applicable_principles(const PrincipleStructure& structure,
                                                  const WorldState& w,
                                                  const VariableSet& vars) {
  ApplicablePrinciples out;
  for (std::size_t rank = 0; rank < structure.classes.size(); ++rank) {
    std::vector<RankedPrinciple> in_class;
    for (const auto& p : structure.classes[rank])
      if (applies(p, w, vars)) in_class.push_back({rank, &p});
    std::sort(in_class.begin(), in_class.end(),
              [](const auto& a, const auto& b) { return a.id() < b.id(); });
    if (out.max_ranked.empty()) out.max_ranked = in_class;
    out.all.insert(out.all.end(), in_class.begin(), in_class.end());
  }
  return out;
}

/// dec_filter: the options every maximally ranked applicable principle
/// permits. With nothing applicable, all options survive.
inline OptionSubset deontic_filter(const PrincipleStructure& structure,
                                   const OptionSet& options, const WorldState& w,
                                   const VariableSet& vars,
                                   DilemmaPolicy policy = DilemmaPolicy::Error) {
  const auto app = applicable_principles(structure, w, vars);
  if (app.max_ranked.empty()) return options.all();

  std::vector<OptionSubset> perms;
  OptionSubset meet = options.all();
  for (const auto& rp : app.max_ranked) {
    perms.push_back(permissible_per_principle(*rp.principle, options, w, vars));
    meet = subset_intersection(meet, perms.back());
  }
  if (!meet.empty()) return meet;

  switch (policy) {
    case DilemmaPolicy::Error: {
      std::vector<std::string> ids;
      for (const auto& rp : app.max_ranked) ids.push_back(rp.id());
      throw DilemmaError("true moral dilemma in <" + describe(w, vars) +
                             ">: principles " + join(ids, ", ") +
                             " permit no common option",
                         ids);
    }
    case DilemmaPolicy::Union: {
      // union over the top principles that have grip
      OptionSubset joined;
      for (const auto& perm : perms)
        if (perm.size() != options.size()) joined = subset_union(joined, perm);
      return joined.empty() ? options.all() : joined;
    }
    case DilemmaPolicy::PassThrough:
      return options.all();
  }
  return options.all();
}

inline Report validate_principles(const PrincipleStructure& structure,
                                  const OptionSet& options, const VariableSet& vars) {
  Report r;
  std::set<std::string> ids;
  for (std::size_t c = 0; c < structure.classes.size(); ++c) {
    const std::string cpath = "/principles/" + std::to_string(c);
    if (structure.classes[c].empty())
      r.error(cpath, "principle class " + std::to_string(c + 1) + " is empty");
    for (std::size_t i = 0; i < structure.classes[c].size(); ++i) {
      const auto& p = structure.classes[c][i];
      const std::string ppath = cpath + "/" + std::to_string(i);
      const std::string owner = "principle '" + p.id + "'";
      if (p.id.empty()) r.error(ppath + "/id", "principle id is empty");
      if (!ids.insert(p.id).second)
        r.error(ppath + "/id", "duplicate principle id '" + p.id + "'");
      p.condition.validate(vars, ppath + "/when", owner, r);

      std::set<std::string> mentioned;
      for (std::size_t k = 0; k < p.structure.classes.size(); ++k) {
        const auto& cls = p.structure.classes[k];
        const std::string kpath = ppath + "/prefer/" + std::to_string(k);
        if (cls.empty()) r.error(kpath, owner + ": option class " + std::to_string(k + 1) + " is empty");
        for (std::size_t j = 0; j < cls.size(); ++j) {
          if (!options.find(cls[j]))
            r.error(kpath + "/" + std::to_string(j),
                    owner + " references undeclared option '" + cls[j] + "'");
          if (!mentioned.insert(cls[j]).second)
            r.error(kpath + "/" + std::to_string(j),
                    owner + ": option '" + cls[j] + "' appears in more than one class");
        }
      }
    }
  }
  return r;
}

}  // namespace argdec
