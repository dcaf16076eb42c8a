#pragma once

// Renderings of an argumentation graph: canonical graph-JSON (which reads
// back), Graphviz DOT, and a plain-text rationalization built from the stored
// premise records.

#include <cstdint>
#include <sstream>
#include <string>

#include <json.hpp>

#include "argdec/core.hpp"
#include "argdec/engine.hpp"
#include "argdec/scenario_io.hpp"

namespace argdec {

inline constexpr const char* kGraphSchemaVersion = "1";

namespace graph_json {

using oj = nlohmann::ordered_json;
using json = nlohmann::json;

/// Single-component strengths become a decimal string, others an array of them.
inline oj strength(const Strength& s) {
  if (s.tiers.size() == 1) return format_weight(s.tiers[0]);
  oj arr = oj::array();
  for (double t : s.tiers) arr.push_back(format_weight(t));
  return arr;
}

inline oj premise(const Premise& p) {
  return oj{{"label", p.label}, {"symbolic", p.symbolic}, {"text", p.text}};
}

inline oj premises(const std::vector<Premise>& ps) {
  oj arr = oj::array();
  for (const auto& p : ps) arr.push_back(premise(p));
  return arr;
}

// -- reading ------------------------------------------------------------------

[[noreturn]] inline void fail(const std::string& path, const std::string& what) {
  throw ValidationError("graph-JSON " + (path.empty() ? "/" : path) + ": " + what,
                        {Issue{Severity::Error, path, what}});
}

inline const json& at(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) fail(path + "/" + key, "missing field");
  return j.at(key);
}

inline std::string str(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

inline double real(const json& j, const std::string& path) {
  const auto s = str(j, path);
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') fail(path, "expected a decimal string");
  return x;
}

inline Strength read_strength(const json& j, const std::string& path) {
  Strength s;
  if (j.is_string()) {
    s.tiers.push_back(real(j, path));
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) s.tiers.push_back(real(j[i], path + "/" + std::to_string(i)));
  } else {
    fail(path, "expected a weight string or array");
  }
  return s;
}

inline Premise read_premise(const json& j, const std::string& path) {
  return {str(at(j, "label", path), path + "/label"), str(at(j, "symbolic", path), path + "/symbolic"),
          str(at(j, "text", path), path + "/text")};
}

inline std::vector<Premise> read_premises(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  std::vector<Premise> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(read_premise(j[i], path + "/" + std::to_string(i)));
  return out;
}

inline std::vector<std::string> read_names(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(str(j[i], path + "/" + std::to_string(i)));
  return out;
}

inline Value read_value(const json& j, const std::string& path) {
  if (j.is_number_integer()) return Value(j.get<std::int64_t>());
  if (j.is_string()) return Value(j.get<std::string>());
  fail(path, "expected an integer or a symbol");
}

}  // namespace graph_json

inline nlohmann::ordered_json graph_to_json(const ArgumentationGraph& g) {
  using namespace graph_json;
  oj root;
  root["schema_version"] = kGraphSchemaVersion;

  const auto& pv = g.provenance;
  oj rel{{"mode", to_string(pv.config.relevance.mode)}, {"base", format_weight(pv.config.relevance.base)}};
  oj cfg_weights = oj::array();
  for (double w : pv.config.relevance.weights) cfg_weights.push_back(format_weight(w));
  rel["weights"] = cfg_weights;
  oj used = oj::array();
  for (double w : pv.relevance_weights) used.push_back(format_weight(w));
  root["provenance"] = oj{
      {"scenario", pv.scenario},
      {"timestamp", pv.timestamp},
      {"knowledge", knowledge_to_json(pv.knowledge)},
      {"engine",
       oj{{"relevance", rel},
          {"dilemma_policy", to_string(pv.config.dilemma_policy)},
          {"eu_weight", format_weight(pv.config.eu_weight)},
          {"tolerance", format_weight(pv.config.tolerance)}}},
      {"relevance_weights", used},
      {"options", pv.options},
      {"fallback", pv.fallback},
  };
  root["decision"] = oj{{"chosen", g.v3.chosen}, {"tie_set", g.v3.tie_set}, {"seed", g.v3.seed}};

  oj nodes = oj::array();
  for (const auto& c : g.v1) {
    oj world = oj::array();
    for (const auto& [name, value] : c.world)
      world.push_back(oj{{"variable", name}, {"value", io::value_json(value)}});
    nodes.push_back(oj{{"id", c.id},
                       {"layer", 1},
                       {"kind", "case"},
                       {"world", world},
                       {"probability", format_weight(c.probability)},
                       {"principle", c.principle_id},
                       {"class", c.principle_rank},
                       {"relevance", strength(c.relevance)},
                       {"perm_set", c.perm_set},
                       {"premises", premises(c.premises)},
                       {"conclusion", premise(c.conclusion)}});
  }
  for (const auto& a : g.v2) {
    oj support = oj::array();
    for (const auto& s : a.support) support.push_back(oj{{"case", s.case_id}, {"force", strength(s.force)}});
    nodes.push_back(oj{{"id", a.id},
                       {"layer", 2},
                       {"kind", "option"},
                       {"option", a.option},
                       {"support", support},
                       {"strength", strength(a.strength)},
                       {"premises", premises(a.premises)},
                       {"conclusion", premise(a.conclusion)}});
  }
  {
    const auto& f = g.v3;
    oj entries = oj::array();
    for (const auto& e : f.entries)
      entries.push_back(oj{{"option", e.option},
                           {"force", strength(e.force)},
                           {"expected_utility", format_weight(e.expected_utility)},
                           {"score", strength(e.score)}});
    nodes.push_back(oj{{"id", f.id},
                       {"layer", 3},
                       {"kind", "final"},
                       {"entries", entries},
                       {"chosen", f.chosen},
                       {"tie_set", f.tie_set},
                       {"seed", f.seed},
                       {"premises", premises(f.premises)},
                       {"conclusion", premise(f.conclusion)}});
  }
  root["nodes"] = nodes;

  oj edges = oj::array();
  for (const auto& e : g.e12)
    edges.push_back(oj{{"from", e.from}, {"to", e.to}, {"kind", "pro_tanto"}, {"weight", strength(e.weight)}});
  for (const auto& e : g.e23)
    edges.push_back(oj{{"from", e.from}, {"to", e.to}, {"kind", "overall"}, {"weight", strength(e.weight)}});
  root["edges"] = edges;
  return root;
}

/// Canonical, deterministic graph-JSON.
inline std::string render_graph_json(const ArgumentationGraph& g) {
  return graph_to_json(g).dump(2) + "\n";
}

inline ArgumentationGraph parse_graph_json(const std::string& text) {
  using namespace graph_json;
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    fail("", std::string("JSON syntax error: ") + e.what());
  }
  if (str(at(root, "schema_version", ""), "/schema_version") != kGraphSchemaVersion)
    fail("/schema_version", "unsupported schema_version");

  ArgumentationGraph g;
  const auto& pj = at(root, "provenance", "");
  auto& pv = g.provenance;
  pv.scenario = str(at(pj, "scenario", "/provenance"), "/provenance/scenario");
  pv.timestamp = str(at(pj, "timestamp", "/provenance"), "/provenance/timestamp");
  const auto& kj = at(pj, "knowledge", "/provenance");
  if (!kj.is_object()) fail("/provenance/knowledge", "expected an object");
  for (auto it = kj.begin(); it != kj.end(); ++it)
    pv.knowledge.known.emplace(it.key(), read_value(*it, "/provenance/knowledge/" + it.key()));
  const auto& ej = at(pj, "engine", "/provenance");
  const auto& rj = at(ej, "relevance", "/provenance/engine");
  const auto mode = str(at(rj, "mode", "/provenance/engine/relevance"), "/provenance/engine/relevance/mode");
  if (mode == "archimedean")
    pv.config.relevance.mode = RelevanceMode::Archimedean;
  else if (mode == "lexicographic")
    pv.config.relevance.mode = RelevanceMode::Lexicographic;
  else
    fail("/provenance/engine/relevance/mode", "unknown relevance mode");
  pv.config.relevance.base = real(at(rj, "base", "/provenance/engine/relevance"), "/provenance/engine/relevance/base");
  for (const auto& w : at(rj, "weights", "/provenance/engine/relevance"))
    pv.config.relevance.weights.push_back(real(w, "/provenance/engine/relevance/weights"));
  auto policy = parse_dilemma_policy(str(at(ej, "dilemma_policy", "/provenance/engine"), "/provenance/engine/dilemma_policy"));
  if (!policy) fail("/provenance/engine/dilemma_policy", "unknown dilemma policy");
  pv.config.dilemma_policy = *policy;
  pv.config.eu_weight = real(at(ej, "eu_weight", "/provenance/engine"), "/provenance/engine/eu_weight");
  pv.config.tolerance = real(at(ej, "tolerance", "/provenance/engine"), "/provenance/engine/tolerance");
  for (const auto& w : at(pj, "relevance_weights", "/provenance"))
    pv.relevance_weights.push_back(real(w, "/provenance/relevance_weights"));
  pv.options = read_names(at(pj, "options", "/provenance"), "/provenance/options");
  const auto& fb = at(pj, "fallback", "/provenance");
  if (!fb.is_boolean()) fail("/provenance/fallback", "expected a boolean");
  pv.fallback = fb.get<bool>();

  const auto& nodes = at(root, "nodes", "");
  if (!nodes.is_array()) fail("/nodes", "expected an array");
  bool have_final = false;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& n = nodes[i];
    const auto path = "/nodes/" + std::to_string(i);
    const auto kind = str(at(n, "kind", path), path + "/kind");
    if (kind == "case") {
      CaseArgument c;
      c.id = str(at(n, "id", path), path + "/id");
      const auto& wj = at(n, "world", path);
      if (!wj.is_array()) fail(path + "/world", "expected an array");
      for (std::size_t j = 0; j < wj.size(); ++j) {
        const auto wpath = path + "/world/" + std::to_string(j);
        c.world.emplace_back(str(at(wj[j], "variable", wpath), wpath + "/variable"),
                             read_value(at(wj[j], "value", wpath), wpath + "/value"));
      }
      c.probability = real(at(n, "probability", path), path + "/probability");
      c.principle_id = str(at(n, "principle", path), path + "/principle");
      const auto& cls = at(n, "class", path);
      if (!cls.is_number_unsigned()) fail(path + "/class", "expected a positive integer");
      c.principle_rank = cls.get<std::size_t>();
      c.relevance = read_strength(at(n, "relevance", path), path + "/relevance");
      c.perm_set = read_names(at(n, "perm_set", path), path + "/perm_set");
      c.premises = read_premises(at(n, "premises", path), path + "/premises");
      c.conclusion = read_premise(at(n, "conclusion", path), path + "/conclusion");
      g.v1.push_back(std::move(c));
    } else if (kind == "option") {
      OptionArgument a;
      a.id = str(at(n, "id", path), path + "/id");
      a.option = str(at(n, "option", path), path + "/option");
      const auto& sj = at(n, "support", path);
      if (!sj.is_array()) fail(path + "/support", "expected an array");
      for (std::size_t j = 0; j < sj.size(); ++j) {
        const auto spath = path + "/support/" + std::to_string(j);
        a.support.push_back({str(at(sj[j], "case", spath), spath + "/case"),
                             read_strength(at(sj[j], "force", spath), spath + "/force")});
      }
      a.strength = read_strength(at(n, "strength", path), path + "/strength");
      a.premises = read_premises(at(n, "premises", path), path + "/premises");
      a.conclusion = read_premise(at(n, "conclusion", path), path + "/conclusion");
      g.v2.push_back(std::move(a));
    } else if (kind == "final") {
      if (have_final) fail(path, "more than one final argument");
      have_final = true;
      auto& f = g.v3;
      f.id = str(at(n, "id", path), path + "/id");
      const auto& ej2 = at(n, "entries", path);
      if (!ej2.is_array()) fail(path + "/entries", "expected an array");
      for (std::size_t j = 0; j < ej2.size(); ++j) {
        const auto epath = path + "/entries/" + std::to_string(j);
        f.entries.push_back({str(at(ej2[j], "option", epath), epath + "/option"),
                             read_strength(at(ej2[j], "force", epath), epath + "/force"),
                             real(at(ej2[j], "expected_utility", epath), epath + "/expected_utility"),
                             read_strength(at(ej2[j], "score", epath), epath + "/score")});
      }
      f.chosen = str(at(n, "chosen", path), path + "/chosen");
      f.tie_set = read_names(at(n, "tie_set", path), path + "/tie_set");
      const auto& seed = at(n, "seed", path);
      if (!seed.is_number_unsigned()) fail(path + "/seed", "expected an unsigned integer");
      f.seed = seed.get<std::uint64_t>();
      f.premises = read_premises(at(n, "premises", path), path + "/premises");
      f.conclusion = read_premise(at(n, "conclusion", path), path + "/conclusion");
    } else {
      fail(path + "/kind", "unknown node kind '" + kind + "'");
    }
  }
  if (!have_final) fail("/nodes", "no final argument");

  const auto& edges = at(root, "edges", "");
  if (!edges.is_array()) fail("/edges", "expected an array");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& e = edges[i];
    const auto path = "/edges/" + std::to_string(i);
    Edge edge{str(at(e, "from", path), path + "/from"), str(at(e, "to", path), path + "/to"),
              read_strength(at(e, "weight", path), path + "/weight")};
    const auto kind = str(at(e, "kind", path), path + "/kind");
    if (kind == "pro_tanto")
      g.e12.push_back(std::move(edge));
    else if (kind == "overall")
      g.e23.push_back(std::move(edge));
    else
      fail(path + "/kind", "unknown edge kind '" + kind + "'");
  }
  return g;
}

// ---------------------------------------------------------------------------
// DOT
// ---------------------------------------------------------------------------

namespace dot {

inline std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\')
      out += '\\', out += c;
    else if (c == '\n')
      out += "\\n";
    else
      out += c;
  }
  return out + "\"";
}

}  // namespace dot

/// Three ranked clusters (cases, options, final); edge labels carry weights
/// at four significant digits; the chosen option is filled.
inline std::string render_dot(const ArgumentationGraph& g) {
  using dot::quote;
  std::ostringstream out;
  out << "digraph argumentation {\n"
      << "  rankdir=LR;\n"
      << "  node [shape=box, fontname=\"Helvetica\"];\n"
      << "  edge [fontname=\"Helvetica\"];\n";

  out << "  subgraph cluster_cases {\n"
      << "    label=\"Case distinction\";\n"
      << "    rank=same;\n";
  for (const auto& c : g.v1) {
    std::vector<std::string> world;
    for (const auto& [name, value] : c.world) world.push_back(name + "=" + value.to_string());
    const std::string label = c.id + "\n" + join(world, ", ") + "\nP(w|k) = " +
                              format_display(c.probability) + "\n" + c.principle_id + " (class " +
                              std::to_string(c.principle_rank) + ")\nPerm = {" +
                              join(c.perm_set, ", ") + "}";
    out << "    " << quote(c.id) << " [label=" << quote(label) << "];\n";
  }
  out << "  }\n";

  out << "  subgraph cluster_options {\n"
      << "    label=\"Reason aggregation\";\n"
      << "    rank=same;\n";
  for (const auto& a : g.v2) {
    const std::string label = a.option + "\nforce_overall = " + display(a.strength);
    out << "    " << quote(a.id) << " [label=" << quote(label);
    if (a.option == g.v3.chosen) out << ", style=\"filled,bold\", fillcolor=\"palegreen\"";
    out << "];\n";
  }
  out << "  }\n";

  out << "  subgraph cluster_final {\n"
      << "    label=\"Final action determination\";\n";
  std::string label = "perform " + g.v3.chosen + "\nseed " + std::to_string(g.v3.seed);
  for (const auto& e : g.v3.entries)
    label += "\n" + e.option + ": " + display(e.force) + " + EU " + format_display(e.expected_utility) +
             " = " + display(e.score);
  if (g.provenance.fallback) label += "\nfallback: no principle applies; instrumental choice";
  out << "    " << quote(g.v3.id) << " [label=" << quote(label)
      << ", shape=doubleoctagon, style=\"filled\", fillcolor=\"lightgrey\"];\n";
  out << "  }\n";

  for (const auto& e : g.e12)
    out << "  " << quote(e.from) << " -> " << quote(e.to) << " [label=" << quote(display(e.weight)) << "];\n";
  for (const auto& e : g.e23)
    out << "  " << quote(e.from) << " -> " << quote(e.to) << " [label=" << quote(display(e.weight)) << "];\n";
  out << "}\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Text
// ---------------------------------------------------------------------------

namespace detail {

inline void paragraph(std::ostringstream& out, const std::string& title,
                      const std::vector<Premise>& premises, const Premise& conclusion) {
  out << title << "\n";
  for (const auto& p : premises) out << "  (" << p.label << ") " << p.text << "\n";
  out << "  ----\n";
  out << "  (" << conclusion.label << ") " << conclusion.text << "\n\n";
}

}  // namespace detail

/// One paragraph per argument, layer by layer, ending with the final argument.
inline std::string render_text(const ArgumentationGraph& g) {
  std::ostringstream out;
  out << "Decision: perform " << g.v3.chosen;
  if (!g.provenance.scenario.empty()) out << " (scenario " << g.provenance.scenario << ")";
  out << "\n";
  std::vector<std::string> known;
  for (const auto& [name, v] : g.provenance.knowledge.known) known.push_back(name + "=" + v.to_string());
  out << "Knowledge: " << (known.empty() ? std::string("nothing") : join(known, ", ")) << "\n";
  out << "Cases argued: " << g.v1.size() << "; options supported: " << g.v2.size() << "\n\n";

  if (!g.v1.empty()) out << "== Case distinction ==\n\n";
  for (const auto& c : g.v1)
    detail::paragraph(out, "Argument " + c.id + " (" + c.principle_id + ")", c.premises, c.conclusion);
  if (!g.v2.empty()) out << "== Reason aggregation ==\n\n";
  for (const auto& a : g.v2)
    detail::paragraph(out, "Argument for " + a.option, a.premises, a.conclusion);
  out << "== Final action determination ==\n\n";
  detail::paragraph(out, "Final argument (seed " + std::to_string(g.v3.seed) + ")", g.v3.premises,
                    g.v3.conclusion);
  return out.str();
}

}  // namespace argdec
