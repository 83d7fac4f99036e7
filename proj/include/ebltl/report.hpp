#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ebltl/formula.hpp"
#include "ebltl/ltl/model_check.hpp"
#include "ebltl/ltl/trace.hpp"
#include "ebltl/oracle/corpus.hpp"
#include "ebltl/preserve/beta.hpp"
#include "ebltl/preserve/lemma.hpp"
#include "ebltl/refine/ca.hpp"
#include "ebltl/refine/po.hpp"
#include "ebltl/refine/renaming.hpp"
#include "ebltl/refine/strategy.hpp"
#include "ebltl/sem/explore.hpp"

// JSON views of every result type. Key order is fixed and containers are
// sorted, so equal inputs serialize to equal bytes.
namespace ebltl::report {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1";

template <class Set>
Json strings(const Set& s) {
  Json a = Json::array();
  for (const auto& x : s) a.push_back(x);
  return a;
}

inline Json trace_json(const ltl::Trace& u) {
  Json j;
  j["kind"] = u.is_lasso() ? "lasso" : "finite";
  j["prefix"] = strings(u.prefix);
  j["cycle"] = strings(u.cycle);
  j["text"] = ltl::to_string(u);
  return j;
}

inline Json optional_trace(const std::optional<ltl::Trace>& u) {
  return u ? trace_json(*u) : Json(nullptr);
}

inline Json graph_json(const sem::StateGraph& g) {
  Json j;
  j["machine"] = g.machine ? g.machine->name : "";
  j["max_states"] = g.limits.max_states;
  Json states = Json::array();
  for (size_t s = 0; s < g.states.size(); ++s) states.push_back({{"id", s}, {"text", g.state_text(s)}});
  j["states"] = states;
  j["initial"] = g.initial;
  Json edges = Json::array();
  for (const auto& e : g.edges) {
    Json x;
    x["source"] = e.source;
    x["event"] = e.event;
    std::string label = e.event;
    if (g.machine) {
      int k = g.machine->event_index(e.event);
      if (k >= 0) label = refine::detail::firing_text(g.machine->events[k], e.params, *g.machine);
    }
    x["label"] = label;
    x["target"] = e.target;
    edges.push_back(x);
  }
  j["edges"] = edges;
  j["deadlocks"] = g.deadlocks;
  return j;
}

inline Json verdict_json(const ltl::Verdict& v, const Formula& phi) {
  Json j;
  j["formula"] = to_string(phi);
  j["holds"] = v.holds;
  j["method"] = v.method;
  j["product_states"] = v.product_states;
  j["counterexample"] = optional_trace(v.counterexample);
  j["warnings"] = strings(v.warnings);
  return j;
}

inline Json renaming_json(const refine::RenamingMap& h) {
  Json j;
  Json fwd = Json::object();
  for (const auto& [c, a] : h.forward) fwd[c] = a;
  j["forward"] = fwd;
  j["concrete_alphabet"] = strings(h.concrete_alphabet);
  j["abstract_alphabet"] = strings(h.abstract_alphabet);
  j["new_events"] = strings(h.new_events());
  return j;
}

inline Json po_json(const refine::POReport& r) {
  Json j;
  j["abstract"] = r.abstract_name;
  j["concrete"] = r.concrete_name;
  j["holds"] = r.all_hold();
  j["pairs"] = r.pairs;
  j["max_states"] = r.max_states;
  Json obs = Json::array();
  for (const auto& o : r.obligations) {
    Json x;
    x["name"] = o.name;
    x["holds"] = o.holds;
    x["witness"] = o.holds ? Json(nullptr) : Json(o.witness);
    x["path"] = strings(o.path);
    obs.push_back(x);
  }
  j["obligations"] = obs;
  return j;
}

inline Json labels_json(const refine::LabelSets& l) {
  return {{"ordinary", strings(l.ordinary)},
          {"anticipated", strings(l.anticipated)},
          {"convergent", strings(l.convergent)}};
}

inline Json strategy_json(const refine::StrategyReport& r,
                          const std::vector<std::string>& machines) {
  Json j;
  j["holds"] = r.holds();
  j["violated_rules"] = strings(r.violated_rules());
  Json f = Json::array();
  for (const auto& x : r.findings)
    f.push_back({{"rule", x.rule},
                 {"level", x.level},
                 {"machine", x.machine},
                 {"event", x.event},
                 {"message", x.message}});
  j["findings"] = f;
  Json labels = Json::array();
  for (size_t i = 0; i < r.labels.size(); ++i) {
    Json l = labels_json(r.labels[i]);
    l["machine"] = i < machines.size() ? machines[i] : "";
    labels.push_back(l);
  }
  j["labels"] = labels;
  return j;
}

inline Json ca_json(const refine::CAVerdict& v) {
  return {{"holds", v.holds}, {"witness", optional_trace(v.witness)}};
}

inline Json theorem1_json(const refine::Theorem1Report& r) {
  Json j;
  Json imgs = Json::array();
  for (const auto& s : r.convergent_images) imgs.push_back(strings(s));
  j["convergent_images"] = imgs;
  j["c_star"] = strings(r.c_star);
  j["o_star"] = strings(r.o_star);
  j["strategy_ok"] = r.strategy_ok;
  j["pos_ok"] = r.pos_ok;
  j["asserted"] = r.asserted;
  j["direct"] = ca_json(r.direct);
  j["consistent"] = r.consistent();
  j["holds"] = r.holds();
  return j;
}

inline Json dependence_json(const preserve::DependenceVerdict& v) {
  Json j;
  j["status"] = preserve::to_string(v.status);
  j["method"] = v.method;
  j["witness"] = optional_trace(v.witness);
  j["bounds"] = {{"prefix", v.bounds.prefix}, {"cycle", v.bounds.cycle}};
  j["traces_checked"] = v.traces_checked;
  return j;
}

inline Json certificate_json(const preserve::Certificate& c) {
  Json j;
  j["lemma"] = c.lemma;
  j["chain"] = c.chain;
  j["machines"] = strings(c.machines);
  j["level"] = c.level;
  j["max_states"] = c.max_states;
  Json k = Json::object();
  for (const auto& [n, v] : c.constants) k[n] = v;
  j["constants"] = k;
  j["property"] = c.property ? Json(to_string(*c.property)) : Json(nullptr);
  j["beta"] = strings(c.beta);
  j["dependence"] = c.dependence ? dependence_json(*c.dependence) : Json(nullptr);
  Json hs = Json::array();
  for (const auto& h : c.hypotheses)
    hs.push_back({{"id", h.id}, {"name", h.name}, {"holds", h.holds}, {"evidence", h.evidence}});
  j["hypotheses"] = hs;
  j["conclusion"] = to_string(c.conclusion);
  j["asserted"] = c.asserted;
  j["cross_validation"] = {{"ran", c.cross.ran},
                           {"holds", c.cross.holds},
                           {"counterexample", optional_trace(c.cross.counterexample)}};
  j["consistent"] = c.consistent();
  return j;
}

inline Json diff_json(const oracle::DiffReport& r) {
  Json j;
  j["ok"] = r.ok();
  Json rows = Json::array();
  for (const auto& x : r.rows) {
    Json row;
    row["entry"] = x.entry;
    row["machine"] = x.machine;
    row["property"] = x.property;
    row["expected"] = x.expected ? Json(*x.expected) : Json(nullptr);
    row["source"] = x.source;
    row["checker"] = x.checker;
    row["oracle"] = x.oracle;
    row["oracle_method"] = x.oracle_method;
    row["counterexample"] = optional_trace(x.counterexample);
    row["counterexample_ok"] = x.counterexample_ok;
    rows.push_back(row);
  }
  j["rows"] = rows;
  j["random_pairs"] = r.random_pairs;
  j["random_disagreements"] = r.random_disagreements;
  j["failures"] = strings(r.failures);
  return j;
}

/// Top-level document: tool, schema version, command, outcome, payload.
inline Json envelope(const std::string& command, const std::string& outcome, Json result) {
  Json j;
  j["tool"] = "ebltl";
  j["schema"] = kSchemaVersion;
  j["command"] = command;
  j["outcome"] = outcome;
  j["result"] = std::move(result);
  return j;
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace ebltl::report
