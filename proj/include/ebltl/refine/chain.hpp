#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ebltl/dsl/machine.hpp"
#include "ebltl/dsl/print.hpp"
#include "ebltl/error.hpp"
#include "ebltl/refine/renaming.hpp"

namespace ebltl::refine {

/// One refinement step M_i -> M_{i+1}: the renaming f_{i+1} and the gluing
/// predicate J over both variable sets.
struct Link {
  RenamingMap renaming;
  dsl::ExprPtr gluing;            // resolved; null means true
  std::string gluing_text;        // for reports
};

/// Events of one machine partitioned by status.
struct LabelSets {
  EventSet ordinary;
  EventSet anticipated;
  EventSet convergent;
};

inline LabelSets labels_of(const dsl::MachineAST& m) {
  LabelSets l;
  for (const auto& e : m.events) {
    switch (e.status) {
      case dsl::Status::Ordinary:
        l.ordinary.insert(e.name);
        break;
      case dsl::Status::Anticipated:
        l.anticipated.insert(e.name);
        break;
      case dsl::Status::Convergent:
        l.convergent.insert(e.name);
        break;
    }
  }
  return l;
}

inline EventSet alphabet_of(const dsl::MachineAST& m) {
  auto v = m.alphabet();
  return EventSet(v.begin(), v.end());
}

/// M_0 .. M_n with links[i] connecting machines[i] to machines[i+1].
struct RefinementChain {
  std::string name;
  std::vector<dsl::MachineAST> machines;
  std::vector<std::string> files;
  std::vector<Link> links;
  dsl::ConstantOverrides constants;
  std::map<std::string, std::string> properties;
  std::filesystem::path manifest;

  size_t n() const { return machines.empty() ? 0 : machines.size() - 1; }
  const dsl::MachineAST& final_machine() const { return machines.back(); }
  LabelSets labels(size_t i) const { return labels_of(machines.at(i)); }
  /// f_j for 1 <= j <= n.
  const RenamingMap& f(size_t j) const { return links.at(j - 1).renaming; }
};

namespace detail {

inline dsl::ExprPtr conjoin(dsl::ExprPtr a, dsl::ExprPtr b) {
  if (!a) return b;
  if (!b) return a;
  auto e = dsl::make_expr(dsl::Op::And, {a, b});
  e->type = dsl::Type::boolean();
  return e;
}

/// x = x for every variable name the two machines share.
inline dsl::ExprPtr shared_equalities(const dsl::MachineAST& concrete,
                                      const dsl::MachineAST& abstract) {
  dsl::ExprPtr acc;
  for (size_t i = 0; i < concrete.variables.size(); ++i) {
    const auto& cv = concrete.variables[i];
    int j = abstract.variable_index(cv.name);
    if (j < 0) continue;
    const auto& av = abstract.variables[j];
    if (cv.type.kind != av.type.kind)
      throw TypeError("shared variable '" + cv.name + "' has different types in " +
                          abstract.name + " and " + concrete.name,
                      0, 0);
    if (cv.type.carrier >= 0 &&
        (concrete.carriers[cv.type.carrier].name != abstract.carriers[av.type.carrier].name ||
         concrete.carriers[cv.type.carrier].elements !=
             abstract.carriers[av.type.carrier].elements))
      throw TypeError("shared variable '" + cv.name + "' ranges over different carriers in " +
                          abstract.name + " and " + concrete.name,
                      0, 0);
    auto l = dsl::make_expr(dsl::Op::Var);
    l->index = static_cast<int>(i);
    l->name = cv.name;
    l->type = cv.type;
    auto r = dsl::make_expr(dsl::Op::AbsVar);
    r->index = j;
    r->name = cv.name;
    r->type = cv.type;
    auto eq = dsl::make_expr(dsl::Op::Eq, {l, r});
    eq->type = dsl::Type::boolean();
    acc = conjoin(acc, eq);
  }
  return acc;
}

}  // namespace detail

/// Builds the link between two adjacent machines. `explicit_map` (from a
/// manifest) must agree with any `refines` clauses, and events it omits are
/// new unless they carry a refines clause. Without a map, an event with no
/// refines clause refines the same-named abstract event if there is one.
inline Link make_link(dsl::MachineAST& concrete, const dsl::MachineAST& abstract,
                      const std::optional<std::map<std::string, std::string>>& explicit_map,
                      const std::string& extra_gluing = "") {
  Link link;
  RenamingMap& r = link.renaming;
  r.concrete_alphabet = alphabet_of(concrete);
  r.abstract_alphabet = alphabet_of(abstract);
  if (explicit_map) {
    for (const auto& [c, a] : *explicit_map) {
      if (!r.concrete_alphabet.count(c))
        throw Error("renaming maps unknown concrete event '" + c + "' of " + concrete.name);
      if (!r.abstract_alphabet.count(a))
        throw Error("renaming maps '" + c + "' to unknown abstract event '" + a + "' of " +
                    abstract.name);
      r.forward[c] = a;
    }
  }
  for (const auto& e : concrete.events) {
    if (e.refines) {
      if (!r.abstract_alphabet.count(*e.refines))
        throw TypeError("event '" + e.name + "' refines unknown event '" + *e.refines +
                            "' of " + abstract.name,
                        e.line, 1);
      auto it = r.forward.find(e.name);
      if (it != r.forward.end() && it->second != *e.refines)
        throw Error("renaming maps '" + e.name + "' to '" + it->second +
                    "' but the machine says it refines '" + *e.refines + "'");
      r.forward[e.name] = *e.refines;
    } else if (!r.forward.count(e.name) && !explicit_map && r.abstract_alphabet.count(e.name)) {
      r.forward[e.name] = e.name;
    }
  }
  if (concrete.refines && *concrete.refines != abstract.name)
    throw Error("machine " + concrete.name + " refines " + *concrete.refines + ", not " +
                abstract.name);

  dsl::bind_linking(concrete, abstract);
  link.gluing = detail::shared_equalities(concrete, abstract);
  std::vector<std::string> text;
  for (const auto& v : concrete.variables)
    if (abstract.variable_index(v.name) >= 0) text.push_back(v.name + " = " + v.name);
  if (concrete.linking) {
    link.gluing = detail::conjoin(link.gluing, concrete.linking);
    text.push_back(dsl::to_string(concrete.linking, &concrete));
  }
  if (!extra_gluing.empty()) {
    link.gluing = detail::conjoin(link.gluing, dsl::parse_linking(extra_gluing, concrete, abstract));
    text.push_back(extra_gluing);
  }
  for (size_t i = 0; i < text.size(); ++i)
    link.gluing_text += (i ? " & " : "") + std::string(text.size() > 1 ? "(" : "") + text[i] +
                        (text.size() > 1 ? ")" : "");
  if (text.empty()) link.gluing_text = "TRUE";
  return link;
}

/// Assembles a chain from already parsed machines. Each machine after the
/// first must have been parsed with its predecessor as the abstraction when
/// its linking clause mentions abstract variables.
inline RefinementChain make_chain(
    std::vector<dsl::MachineAST> machines,
    const std::vector<std::optional<std::map<std::string, std::string>>>& maps = {},
    const std::vector<std::string>& gluing = {}) {
  if (machines.empty()) throw Error("a refinement chain needs at least one machine");
  RefinementChain c;
  c.machines = std::move(machines);
  for (size_t i = 1; i < c.machines.size(); ++i) {
    std::optional<std::map<std::string, std::string>> m;
    if (i - 1 < maps.size()) m = maps[i - 1];
    std::string g = i - 1 < gluing.size() ? gluing[i - 1] : "";
    c.links.push_back(make_link(c.machines[i], c.machines[i - 1], m, g));
  }
  return c;
}

/// Reads a chain manifest (JSON): ordered machine files relative to the
/// manifest, optional per-step renaming and linking, constant overrides,
/// and named properties.
inline RefinementChain load_chain(const std::filesystem::path& manifest,
                                  const dsl::ConstantOverrides& extra_constants = {}) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(dsl::read_text_file(manifest));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(manifest.filename().string() + ": " + e.what(), 0, 0);
  }
  auto base = manifest.parent_path();
  if (!j.contains("machines") || !j["machines"].is_array() || j["machines"].empty())
    throw ParseError(manifest.filename().string() + ": 'machines' must be a non-empty list", 0, 0);

  dsl::ConstantOverrides constants;
  if (j.contains("constants"))
    for (auto& [k, v] : j["constants"].items()) constants[k] = v.get<std::int64_t>();
  for (const auto& [k, v] : extra_constants) constants[k] = v;

  std::vector<dsl::MachineAST> machines;
  std::vector<std::string> files;
  for (const auto& f : j["machines"]) {
    auto path = base / f.get<std::string>();
    // Overrides apply only to machines that declare the constant.
    dsl::MachineAST probe = dsl::load_machine(path);
    dsl::ConstantOverrides mine;
    for (const auto& c : probe.constants)
      if (constants.count(c.name)) mine[c.name] = constants.at(c.name);
    const dsl::MachineAST* abs = machines.empty() ? nullptr : &machines.back();
    machines.push_back(dsl::load_machine(path, mine, abs));
    files.push_back(f.get<std::string>());
  }

  std::vector<std::optional<std::map<std::string, std::string>>> maps(machines.size());
  std::vector<std::string> gluing(machines.size());
  if (j.contains("steps")) {
    const auto& steps = j["steps"];
    if (!steps.is_array() || steps.size() + 1 != machines.size())
      throw ParseError(manifest.filename().string() +
                           ": 'steps' must have one entry per refinement step",
                       0, 0);
    for (size_t i = 0; i < steps.size(); ++i) {
      if (steps[i].contains("renaming"))
        maps[i] = steps[i]["renaming"].get<std::map<std::string, std::string>>();
      if (steps[i].contains("linking")) gluing[i] = steps[i]["linking"].get<std::string>();
    }
  }
  RefinementChain c = make_chain(std::move(machines), maps, gluing);
  c.files = files;
  c.manifest = manifest;
  c.constants = constants;
  c.name = j.value("name", manifest.stem().string());
  if (j.contains("properties"))
    c.properties = j["properties"].get<std::map<std::string, std::string>>();
  return c;
}

}  // namespace ebltl::refine
