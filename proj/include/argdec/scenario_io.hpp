#pragma once

// Scenario and knowledge documents (JSON, schema_version "1").
//
// Conditions are prefix arrays: ["and", c...], ["or", c...], ["not", c],
// [cmp, variable, constant] with cmp one of == != < <= > >=, plus the
// literals true and false. Probabilities are numbers or exact "p/q" strings.

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "argdec/core.hpp"
#include "argdec/scenario.hpp"

namespace argdec {

inline constexpr const char* kScenarioSchemaVersion = "1";

namespace io {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

inline std::string child(const std::string& path, const std::string& key) {
  return path + "/" + key;
}
inline std::string child(const std::string& path, std::size_t i) {
  return path + "/" + std::to_string(i);
}

/// Reads typed fields out of a JSON document, recording every problem with
/// its path instead of stopping at the first.
class Reader {
 public:
  Report& report() { return report_; }

  const json* field(const json& obj, const std::string& path, const std::string& key,
                    bool required) {
    if (!obj.is_object()) return nullptr;
    auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) report_.error(child(path, key), "missing required field '" + key + "'");
      return nullptr;
    }
    return &*it;
  }

  bool expect_object(const json& j, const std::string& path) {
    if (j.is_object()) return true;
    report_.error(path, "expected an object");
    return false;
  }
  bool expect_array(const json& j, const std::string& path) {
    if (j.is_array()) return true;
    report_.error(path, "expected an array");
    return false;
  }

  void unknown_keys(const json& obj, const std::string& path,
                    std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) return;
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || it.key() == a;
      if (!ok) report_.warning(child(path, it.key()), "unknown field '" + it.key() + "' ignored");
    }
  }

  std::optional<std::string> string(const json& j, const std::string& path) {
    if (j.is_string()) return j.get<std::string>();
    report_.error(path, "expected a string");
    return std::nullopt;
  }

  std::optional<double> number(const json& j, const std::string& path) {
    if (j.is_number()) return j.get<double>();
    report_.error(path, "expected a number");
    return std::nullopt;
  }

  std::optional<Value> value(const json& j, const std::string& path) {
    if (j.is_number_integer()) return Value(j.get<std::int64_t>());
    if (j.is_string()) return Value(j.get<std::string>());
    report_.error(path, "expected an integer or a symbol");
    return std::nullopt;
  }

  /// A number, or an exact fraction written as "p/q".
  std::optional<double> probability(const json& j, const std::string& path) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
      const auto s = j.get<std::string>();
      const auto slash = s.find('/');
      if (slash != std::string::npos) {
        try {
          std::size_t used_n = 0, used_d = 0;
          const auto num = std::stoll(s.substr(0, slash), &used_n);
          const auto den = std::stoll(s.substr(slash + 1), &used_d);
          if (used_n == slash && used_d == s.size() - slash - 1 && den > 0)
            return static_cast<double>(num) / static_cast<double>(den);
        } catch (const std::exception&) {
        }
      }
    }
    report_.error(path, "expected a probability (number or \"p/q\")");
    return std::nullopt;
  }

  Condition condition(const json& j, const std::string& path) {
    if (j.is_boolean()) return j.get<bool>() ? Condition::always() : Condition::never();
    if (!j.is_array() || j.empty() || !j[0].is_string()) {
      report_.error(path, "expected a condition: true, false or [operator, ...]");
      return Condition::never();
    }
    const auto op = j[0].get<std::string>();
    if (op == "and" || op == "or") {
      std::vector<Condition> children;
      for (std::size_t i = 1; i < j.size(); ++i) children.push_back(condition(j[i], child(path, i)));
      return op == "and" ? Condition::all_of(std::move(children))
                         : Condition::any_of(std::move(children));
    }
    if (op == "not") {
      if (j.size() != 2) {
        report_.error(path, "'not' takes exactly one operand");
        return Condition::never();
      }
      return Condition::negate(condition(j[1], child(path, 1)));
    }
    if (auto cmp = parse_comparator(op)) {
      if (j.size() != 3) {
        report_.error(path, "comparison '" + op + "' takes a variable and a constant");
        return Condition::never();
      }
      auto var = string(j[1], child(path, 1));
      auto val = value(j[2], child(path, 2));
      if (!var || !val) return Condition::never();
      return Condition::atom(*var, *cmp, *val);
    }
    report_.error(child(path, 0), "unknown condition operator '" + op + "'");
    return Condition::never();
  }

 private:
  Report report_;
};

inline ordered_json value_json(const Value& v) {
  return v.is_int() ? ordered_json(v.as_int()) : ordered_json(v.as_symbol());
}

inline ordered_json condition_json(const Condition& c) {
  switch (c.kind()) {
    case Condition::Kind::And:
    case Condition::Kind::Or: {
      const bool conj = c.kind() == Condition::Kind::And;
      if (c.children().empty()) return ordered_json(conj);
      ordered_json arr = ordered_json::array({conj ? "and" : "or"});
      for (const auto& ch : c.children()) arr.push_back(condition_json(ch));
      return arr;
    }
    case Condition::Kind::Not:
      return ordered_json::array({"not", condition_json(c.children().front())});
    case Condition::Kind::Atom:
      return ordered_json::array(
          {comparator_symbol(c.comparator()), c.variable(), value_json(c.constant())});
  }
  return ordered_json(false);
}

inline std::string line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

/// Parses JSON text; syntax errors become one issue carrying line and column.
inline std::optional<json> parse_json(const std::string& text, Report& report) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    report.error(line_column(text, e.byte == 0 ? 0 : e.byte - 1),
                 std::string("JSON syntax error: ") + e.what());
    return std::nullopt;
  }
}

}  // namespace io

struct ScenarioLoad {
  std::optional<Scenario> scenario;  // set when the document was structurally readable
  Report report;                     // parse problems plus validate_scenario
  bool ok() const { return scenario.has_value() && !report.has_errors(); }
};

/// Reads and validates a scenario without throwing.
inline ScenarioLoad load_scenario(const std::string& text) {
  using io::child;
  ScenarioLoad out;
  io::Reader rd;
  auto doc = io::parse_json(text, rd.report());
  if (!doc) {
    out.report = rd.report();
    return out;
  }
  const auto& root = *doc;
  if (!rd.expect_object(root, "")) {
    out.report = rd.report();
    return out;
  }
  rd.unknown_keys(root, "", {"schema_version", "name", "variables", "credences", "options",
                             "outcome", "utility", "principles", "engine", "simulation"});

  Scenario s;
  if (auto* v = rd.field(root, "", "schema_version", true)) {
    if (!v->is_string() || v->get<std::string>() != kScenarioSchemaVersion)
      rd.report().error("/schema_version", std::string("unsupported schema_version, expected \"") +
                                               kScenarioSchemaVersion + "\"");
  }
  if (auto* v = rd.field(root, "", "name", false))
    if (auto n = rd.string(*v, "/name")) s.name = *n;

  // variables
  std::vector<VariableSpec> specs;
  if (auto* vars = rd.field(root, "", "variables", true); vars && rd.expect_array(*vars, "/variables")) {
    for (std::size_t i = 0; i < vars->size(); ++i) {
      const auto& vj = (*vars)[i];
      const auto path = child("/variables", i);
      if (!rd.expect_object(vj, path)) continue;
      rd.unknown_keys(vj, path, {"name", "domain"});
      VariableSpec spec;
      if (auto* n = rd.field(vj, path, "name", true))
        if (auto name = rd.string(*n, child(path, "name"))) spec.name = *name;
      if (auto* d = rd.field(vj, path, "domain", true); d && rd.expect_array(*d, child(path, "domain")))
        for (std::size_t j = 0; j < d->size(); ++j)
          if (auto val = rd.value((*d)[j], child(child(path, "domain"), j))) spec.domain.push_back(*val);
      specs.push_back(std::move(spec));
    }
  }
  s.variables = VariableSet(std::move(specs));

  // credences
  std::vector<CredenceTable> tables;
  if (auto* cr = rd.field(root, "", "credences", false); cr && rd.expect_array(*cr, "/credences")) {
    for (std::size_t i = 0; i < cr->size(); ++i) {
      const auto& tj = (*cr)[i];
      const auto path = child("/credences", i);
      if (!rd.expect_object(tj, path)) continue;
      rd.unknown_keys(tj, path, {"variable", "given", "rows", "p"});
      CredenceTable t;
      if (auto* v = rd.field(tj, path, "variable", true))
        if (auto name = rd.string(*v, child(path, "variable"))) t.variable = *name;
      if (auto* g = rd.field(tj, path, "given", false); g && rd.expect_array(*g, child(path, "given")))
        for (std::size_t j = 0; j < g->size(); ++j)
          if (auto name = rd.string((*g)[j], child(child(path, "given"), j))) t.parents.push_back(*name);

      auto read_probs = [&](const io::json& pj, const std::string& ppath) {
        std::vector<double> probs;
        if (!rd.expect_array(pj, ppath)) return probs;
        for (std::size_t j = 0; j < pj.size(); ++j)
          probs.push_back(rd.probability(pj[j], child(ppath, j)).value_or(-1.0));
        return probs;
      };

      auto* rows = rd.field(tj, path, "rows", false);
      auto* flat = rd.field(tj, path, "p", false);
      if (rows && flat) {
        rd.report().error(path, "give either 'rows' or 'p', not both");
      } else if (flat) {
        t.rows.push_back({{}, read_probs(*flat, child(path, "p"))});
      } else if (!rows) {
        rd.report().error(child(path, "rows"), "missing required field 'rows'");
      } else if (rd.expect_array(*rows, child(path, "rows"))) {
        for (std::size_t r = 0; r < rows->size(); ++r) {
          const auto& rj = (*rows)[r];
          const auto rpath = child(child(path, "rows"), r);
          if (!rd.expect_object(rj, rpath)) continue;
          rd.unknown_keys(rj, rpath, {"given", "p"});
          CredenceRow row;
          if (auto* g = rd.field(rj, rpath, "given", false); g && rd.expect_array(*g, child(rpath, "given")))
            for (std::size_t j = 0; j < g->size(); ++j)
              if (auto val = rd.value((*g)[j], child(child(rpath, "given"), j))) row.given.push_back(*val);
          if (auto* p = rd.field(rj, rpath, "p", true)) row.probs = read_probs(*p, child(rpath, "p"));
          t.rows.push_back(std::move(row));
        }
      }
      tables.push_back(std::move(t));
    }
  }
  s.credences = CredenceModel(std::move(tables));

  // options
  std::vector<std::string> options;
  if (auto* op = rd.field(root, "", "options", true); op && rd.expect_array(*op, "/options"))
    for (std::size_t i = 0; i < op->size(); ++i)
      if (auto name = rd.string((*op)[i], child("/options", i))) options.push_back(*name);
  s.options = OptionSet(std::move(options));

  // outcome
  if (auto* oc = rd.field(root, "", "outcome", false); oc && rd.expect_object(*oc, "/outcome")) {
    rd.unknown_keys(*oc, "/outcome", {"default", "rules"});
    if (auto* d = rd.field(*oc, "/outcome", "default", false)) {
      auto mode = rd.string(*d, "/outcome/default");
      if (mode == "self-loop")
        s.outcome.missing = MissingTransition::SelfLoop;
      else if (mode == "error")
        s.outcome.missing = MissingTransition::Error;
      else if (mode)
        rd.report().error("/outcome/default", "expected \"self-loop\" or \"error\"");
    }
    if (auto* rules = rd.field(*oc, "/outcome", "rules", false);
        rules && rd.expect_array(*rules, "/outcome/rules")) {
      for (std::size_t i = 0; i < rules->size(); ++i) {
        const auto& rj = (*rules)[i];
        const auto path = child("/outcome/rules", i);
        if (!rd.expect_object(rj, path)) continue;
        rd.unknown_keys(rj, path, {"option", "when", "effects"});
        OutcomeRule rule;
        if (auto* o = rd.field(rj, path, "option", true))
          if (auto name = rd.string(*o, child(path, "option"))) rule.option = *name;
        if (auto* w = rd.field(rj, path, "when", false)) rule.when = rd.condition(*w, child(path, "when"));
        if (auto* ef = rd.field(rj, path, "effects", true); ef && rd.expect_array(*ef, child(path, "effects"))) {
          for (std::size_t j = 0; j < ef->size(); ++j) {
            const auto& ej = (*ef)[j];
            const auto epath = child(child(path, "effects"), j);
            if (!rd.expect_object(ej, epath)) continue;
            rd.unknown_keys(ej, epath, {"p", "set", "add"});
            Effect e;
            if (auto* p = rd.field(ej, epath, "p", false))
              e.probability = rd.probability(*p, child(epath, "p")).value_or(-1.0);
            if (auto* st = rd.field(ej, epath, "set", false); st && rd.expect_object(*st, child(epath, "set")))
              for (auto it = st->begin(); it != st->end(); ++it)
                if (auto val = rd.value(*it, child(child(epath, "set"), it.key()))) e.set.emplace(it.key(), *val);
            if (auto* ad = rd.field(ej, epath, "add", false); ad && rd.expect_object(*ad, child(epath, "add")))
              for (auto it = ad->begin(); it != ad->end(); ++it) {
                if (it->is_number_integer())
                  e.add.emplace(it.key(), it->get<std::int64_t>());
                else
                  rd.report().error(child(child(epath, "add"), it.key()), "expected an integer");
              }
            rule.effects.push_back(std::move(e));
          }
        }
        s.outcome.rules.push_back(std::move(rule));
      }
    }
  }

  // utility
  if (auto* ut = rd.field(root, "", "utility", true); ut && rd.expect_array(*ut, "/utility")) {
    for (std::size_t i = 0; i < ut->size(); ++i) {
      const auto& uj = (*ut)[i];
      const auto path = child("/utility", i);
      if (!rd.expect_object(uj, path)) continue;
      rd.unknown_keys(uj, path, {"when", "match", "value"});
      UtilityRule rule;
      auto* when = rd.field(uj, path, "when", false);
      auto* match = rd.field(uj, path, "match", false);
      if (when && match) {
        rd.report().error(path, "give either 'when' or 'match', not both");
      } else if (when) {
        rule.when = rd.condition(*when, child(path, "when"));
      } else if (match && rd.expect_object(*match, child(path, "match"))) {
        std::vector<Condition> atoms;
        for (auto it = match->begin(); it != match->end(); ++it)
          if (auto val = rd.value(*it, child(child(path, "match"), it.key())))
            atoms.push_back(Condition::eq(it.key(), *val));
        rule.when = Condition::all_of(std::move(atoms));
      }
      if (auto* v = rd.field(uj, path, "value", true))
        if (auto x = rd.number(*v, child(path, "value"))) rule.value = *x;
      s.utility.rules.push_back(std::move(rule));
    }
  }

  // principles
  if (auto* pr = rd.field(root, "", "principles", false); pr && rd.expect_array(*pr, "/principles")) {
    for (std::size_t c = 0; c < pr->size(); ++c) {
      const auto cpath = child("/principles", c);
      auto& cls = s.principles.classes.emplace_back();
      if (!rd.expect_array((*pr)[c], cpath)) continue;
      for (std::size_t i = 0; i < (*pr)[c].size(); ++i) {
        const auto& pj = (*pr)[c][i];
        const auto path = child(cpath, i);
        if (!rd.expect_object(pj, path)) continue;
        rd.unknown_keys(pj, path, {"id", "when", "prefer"});
        Principle p;
        if (auto* id = rd.field(pj, path, "id", true))
          if (auto name = rd.string(*id, child(path, "id"))) p.id = *name;
        if (auto* w = rd.field(pj, path, "when", false)) p.condition = rd.condition(*w, child(path, "when"));
        if (auto* pf = rd.field(pj, path, "prefer", true); pf && rd.expect_array(*pf, child(path, "prefer"))) {
          for (std::size_t k = 0; k < pf->size(); ++k) {
            const auto kpath = child(child(path, "prefer"), k);
            auto& oc = p.structure.classes.emplace_back();
            if (!rd.expect_array((*pf)[k], kpath)) continue;
            for (std::size_t j = 0; j < (*pf)[k].size(); ++j)
              if (auto name = rd.string((*pf)[k][j], child(kpath, j))) oc.push_back(*name);
          }
        }
        cls.push_back(std::move(p));
      }
    }
  }

  // engine
  if (auto* en = rd.field(root, "", "engine", false); en && rd.expect_object(*en, "/engine")) {
    rd.unknown_keys(*en, "/engine", {"relevance", "dilemma_policy", "eu_weight", "tolerance"});
    if (auto* rel = rd.field(*en, "/engine", "relevance", false);
        rel && rd.expect_object(*rel, "/engine/relevance")) {
      rd.unknown_keys(*rel, "/engine/relevance", {"mode", "base", "weights"});
      if (auto* m = rd.field(*rel, "/engine/relevance", "mode", false)) {
        auto mode = rd.string(*m, "/engine/relevance/mode");
        if (mode == "archimedean")
          s.engine.relevance.mode = RelevanceMode::Archimedean;
        else if (mode == "lexicographic")
          s.engine.relevance.mode = RelevanceMode::Lexicographic;
        else if (mode)
          rd.report().error("/engine/relevance/mode", "expected \"archimedean\" or \"lexicographic\"");
      }
      if (auto* b = rd.field(*rel, "/engine/relevance", "base", false))
        if (auto x = rd.number(*b, "/engine/relevance/base")) s.engine.relevance.base = *x;
      if (auto* w = rd.field(*rel, "/engine/relevance", "weights", false);
          w && rd.expect_array(*w, "/engine/relevance/weights"))
        for (std::size_t i = 0; i < w->size(); ++i)
          if (auto x = rd.number((*w)[i], child("/engine/relevance/weights", i)))
            s.engine.relevance.weights.push_back(*x);
    }
    if (auto* d = rd.field(*en, "/engine", "dilemma_policy", false)) {
      if (auto name = rd.string(*d, "/engine/dilemma_policy")) {
        if (auto p = parse_dilemma_policy(*name))
          s.engine.dilemma_policy = *p;
        else
          rd.report().error("/engine/dilemma_policy",
                            "expected \"error\", \"union\" or \"pass-through\"");
      }
    }
    if (auto* w = rd.field(*en, "/engine", "eu_weight", false))
      if (auto x = rd.number(*w, "/engine/eu_weight")) s.engine.eu_weight = *x;
    if (auto* t = rd.field(*en, "/engine", "tolerance", false))
      if (auto x = rd.number(*t, "/engine/tolerance")) s.engine.tolerance = *x;
  }

  if (auto* sim = rd.field(root, "", "simulation", false)) s.simulation = *sim;

  out.report = rd.report();
  if (!out.report.has_errors()) out.report.merge(validate_scenario(s));
  out.scenario = std::move(s);
  return out;
}

/// Parses and validates; throws ValidationError carrying every error found.
inline Scenario parse_scenario(const std::string& text) {
  auto load = load_scenario(text);
  if (!load.ok()) {
    auto errors = load.report.errors();
    std::string what = "invalid scenario";
    for (const auto& e : errors) what += "\n  " + e.to_string();
    throw ValidationError(what, std::move(errors));
  }
  return std::move(*load.scenario);
}

inline nlohmann::ordered_json scenario_to_json(const Scenario& s) {
  using oj = nlohmann::ordered_json;
  oj root;
  root["schema_version"] = kScenarioSchemaVersion;
  root["name"] = s.name;

  oj vars = oj::array();
  for (const auto& v : s.variables) {
    oj dom = oj::array();
    for (const auto& d : v.domain) dom.push_back(io::value_json(d));
    vars.push_back(oj{{"name", v.name}, {"domain", dom}});
  }
  root["variables"] = vars;

  oj cred = oj::array();
  for (const auto& t : s.credences.tables()) {
    oj rows = oj::array();
    for (const auto& r : t.rows) {
      oj given = oj::array();
      for (const auto& g : r.given) given.push_back(io::value_json(g));
      rows.push_back(oj{{"given", given}, {"p", r.probs}});
    }
    cred.push_back(oj{{"variable", t.variable}, {"given", t.parents}, {"rows", rows}});
  }
  root["credences"] = cred;
  root["options"] = s.options.names();

  oj rules = oj::array();
  for (const auto& r : s.outcome.rules) {
    oj effects = oj::array();
    for (const auto& e : r.effects) {
      oj set = oj::object();
      for (const auto& [k, v] : e.set) set[k] = io::value_json(v);
      oj add = oj::object();
      for (const auto& [k, v] : e.add) add[k] = v;
      effects.push_back(oj{{"p", e.probability}, {"set", set}, {"add", add}});
    }
    rules.push_back(oj{{"option", r.option}, {"when", io::condition_json(r.when)}, {"effects", effects}});
  }
  root["outcome"] = oj{
      {"default", s.outcome.missing == MissingTransition::SelfLoop ? "self-loop" : "error"},
      {"rules", rules}};

  oj util = oj::array();
  for (const auto& u : s.utility.rules)
    util.push_back(oj{{"when", io::condition_json(u.when)}, {"value", u.value}});
  root["utility"] = util;

  oj principles = oj::array();
  for (const auto& cls : s.principles.classes) {
    oj c = oj::array();
    for (const auto& p : cls)
      c.push_back(oj{{"id", p.id}, {"when", io::condition_json(p.condition)}, {"prefer", p.structure.classes}});
    principles.push_back(c);
  }
  root["principles"] = principles;

  oj rel{{"mode", s.engine.relevance.mode == RelevanceMode::Archimedean ? "archimedean" : "lexicographic"},
         {"base", s.engine.relevance.base}};
  if (!s.engine.relevance.weights.empty()) rel["weights"] = s.engine.relevance.weights;
  root["engine"] = oj{{"relevance", rel},
                      {"dilemma_policy", to_string(s.engine.dilemma_policy)},
                      {"eu_weight", s.engine.eu_weight},
                      {"tolerance", s.engine.tolerance}};
  if (!s.simulation.is_null()) root["simulation"] = oj::parse(s.simulation.dump());
  return root;
}

inline std::string serialize_scenario(const Scenario& s) { return scenario_to_json(s).dump(2) + "\n"; }

/// Knowledge documents are flat objects of variable -> value.
inline Knowledge parse_knowledge(const std::string& text) {
  io::Reader rd;
  Knowledge k;
  auto doc = io::parse_json(text, rd.report());
  if (doc && rd.expect_object(*doc, "")) {
    for (auto it = doc->begin(); it != doc->end(); ++it)
      if (auto v = rd.value(*it, "/" + it.key())) k.known.emplace(it.key(), *v);
  }
  if (rd.report().has_errors()) {
    std::string what = "invalid knowledge document";
    for (const auto& e : rd.report().errors()) what += "\n  " + e.to_string();
    throw ValidationError(what, rd.report().errors());
  }
  return k;
}

inline nlohmann::ordered_json knowledge_to_json(const Knowledge& k) {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  for (const auto& [name, v] : k.known) out[name] = io::value_json(v);
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
}

}  // namespace argdec
