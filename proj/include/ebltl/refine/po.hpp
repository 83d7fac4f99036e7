#pragma once

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ebltl/dsl/ast.hpp"
#include "ebltl/error.hpp"
#include "ebltl/refine/chain.hpp"
#include "ebltl/sem/eval.hpp"
#include "ebltl/sem/explore.hpp"

namespace ebltl::refine {

/// Outcome of one refinement proof obligation on the bounded pair space.
struct POResult {
  std::string name;
  bool holds = true;
  std::string witness;              // first violation, human readable
  std::vector<std::string> path;    // concrete events leading to it
};

struct POReport {
  std::string abstract_name;
  std::string concrete_name;
  std::vector<POResult> obligations;  // FIS_REF, GRD_REF, INV_REF, WFD_REF
  size_t pairs = 0;
  size_t max_states = 0;

  bool all_hold() const {
    for (const auto& o : obligations)
      if (!o.holds) return false;
    return true;
  }
  const POResult& get(const std::string& n) const {
    for (const auto& o : obligations)
      if (o.name == n) return o;
    throw Error("no obligation named " + n);
  }
};

inline const std::vector<std::string>& po_names() {
  static const std::vector<std::string> names = {"FIS_REF", "GRD_REF", "INV_REF", "WFD_REF"};
  return names;
}

namespace detail {

inline std::string firing_text(const dsl::EventAST& e, const std::vector<sem::Value>& frame,
                               const dsl::MachineAST& m) {
  std::string s = e.name;
  if (!e.params.empty()) {
    s += "(";
    auto names = sem::frame_names(e);
    for (size_t i = 0; i < e.params.size(); ++i)
      s += (i ? ", " : "") + names[i] + "=" + sem::format_value(e.params[i].type, frame[i], m);
    s += ")";
  }
  return s;
}

}  // namespace detail

/// Checks FIS_REF, GRD_REF, INV_REF and WFD_REF for `concrete` refining
/// `abstract` through `link`, by exploring concrete states paired with every
/// abstract state related to them by J.
inline POReport check_refinement_pair(const dsl::MachineAST& abstract,
                                      const dsl::MachineAST& concrete, const Link& link,
                                      sem::Limits limits = {}) {
  using sem::State;
  POReport rep;
  rep.abstract_name = abstract.name;
  rep.concrete_name = concrete.name;
  rep.max_states = limits.max_states;
  for (const auto& n : po_names()) rep.obligations.push_back({n, true, "", {}});
  auto fail = [&](size_t k, std::string witness, std::vector<std::string> path) {
    auto& o = rep.obligations[k];
    if (!o.holds) return;
    o.holds = false;
    o.witness = std::move(witness);
    o.path = std::move(path);
  };
  enum { FIS, GRD, INV, WFD };

  auto glued = [&](const State& c, const State& a) {
    sem::Env env{&c, &a, nullptr};
    return sem::holds(link.gluing, env);
  };
  auto pair_text = [&](const State& c, const State& a) {
    return "[" + sem::format_state(c, concrete) + "] ~ [" + sem::format_state(a, abstract) + "]";
  };
  auto variant = [&](const State& c) {
    sem::Env env{&c, nullptr, nullptr};
    return sem::eval(*concrete.variant, env);
  };

  // Abstract before-after relation, guard ignored (the guard is GRD_REF's
  // business). Results outside the abstract domains/invariant are dropped.
  auto abstract_after = [&](const dsl::EventAST& x, const State& a) {
    std::vector<std::pair<State, bool>> out;  // (a', guard held)
    std::set<State> seen_g, seen_u;
    for (auto& b : sem::all_bindings(abstract, x)) {
      std::vector<sem::Value> frame(x.frame_size, 0);
      std::copy(b.begin(), b.end(), frame.begin());
      sem::Env env{&a, nullptr, &frame};
      bool g = sem::holds(x.guard, env);
      for (auto& f : sem::apply_actions(abstract, x, a, b)) {
        if (!sem::state_ok(abstract, f.target)) continue;
        if (g ? seen_g.insert(f.target).second : seen_u.insert(f.target).second)
          out.push_back({f.target, g});
      }
    }
    return out;
  };

  std::map<std::pair<State, State>, size_t> index;
  std::vector<std::pair<State, State>> pairs;
  std::vector<std::optional<std::pair<size_t, std::string>>> parent;
  std::deque<size_t> queue;
  std::set<State> concrete_seen;

  auto path_of = [&](size_t id) {
    std::vector<std::string> ev;
    while (parent[id]) {
      ev.push_back(parent[id]->second);
      id = parent[id]->first;
    }
    return std::vector<std::string>(ev.rbegin(), ev.rend());
  };
  auto intern = [&](const State& c, const State& a,
                    std::optional<std::pair<size_t, std::string>> via) {
    auto key = std::make_pair(c, a);
    if (index.count(key)) return;
    if (pairs.size() >= limits.max_states * 8)
      throw LimitError("pair limit of " + std::to_string(limits.max_states * 8) + " exceeded");
    if (!sem::state_ok(concrete, c)) {
      std::vector<std::string> path = via ? path_of(via->first) : std::vector<std::string>{};
      if (via) path.push_back(via->second);
      throw sem::ExplorationError(
          "invariant of " + concrete.name + " violated at " + sem::format_state(c, concrete),
          path, sem::format_state(c, concrete));
    }
    concrete_seen.insert(c);
    if (concrete_seen.size() > limits.max_states)
      throw LimitError("state limit of " + std::to_string(limits.max_states) + " exceeded");
    index.emplace(key, pairs.size());
    pairs.push_back(key);
    parent.push_back(std::move(via));
    queue.push_back(pairs.size() - 1);
  };

  // Initialisation: every concrete initial state must be glued to some
  // abstract initial state.
  auto abstract_init = sem::apply_actions(abstract, abstract.init,
                                          State(abstract.variables.size(), 0), {});
  for (auto& cf : sem::apply_actions(concrete, concrete.init,
                                     State(concrete.variables.size(), 0), {})) {
    bool any = false;
    for (auto& af : abstract_init) {
      if (!glued(cf.target, af.target)) continue;
      any = true;
      intern(cf.target, af.target, std::nullopt);
    }
    if (!any)
      fail(INV, "init: no abstract initial state satisfies J with [" +
                    sem::format_state(cf.target, concrete) + "]",
           {});
  }

  std::set<State> variant_checked;
  while (!queue.empty()) {
    size_t id = queue.front();
    queue.pop_front();
    const State c = pairs[id].first;
    const State a = pairs[id].second;

    if (concrete.variant && variant_checked.insert(c).second && variant(c) < 0)
      fail(WFD, "variant is " + std::to_string(variant(c)) + " at [" +
                    sem::format_state(c, concrete) + "]",
           path_of(id));

    for (const auto& e : concrete.events) {
      auto refined = link.renaming.apply(e.name);
      const dsl::EventAST* x =
          refined ? &abstract.events[abstract.event_index(*refined)] : nullptr;
      for (auto& b : sem::enabled_bindings(concrete, e, c)) {
        auto firings = sem::apply_actions(concrete, e, c, b);
        std::string label = detail::firing_text(e, b, concrete);
        if (firings.empty())
          fail(FIS, label + " is enabled at [" + sem::format_state(c, concrete) +
                        "] but has no after-state",
               path_of(id));

        if (x && !sem::enabled(abstract, *x, a))
          fail(GRD, label + " is enabled but abstract " + x->name + " is not at " +
                        pair_text(c, a),
               path_of(id));

        for (auto& f : firings) {
          if (concrete.variant && (e.status != dsl::Status::Ordinary)) {
            sem::Value before = variant(c), after = variant(f.target);
            bool bad = e.status == dsl::Status::Convergent ? !(after < before) : after > before;
            if (bad)
              fail(WFD, std::string(dsl::to_string(e.status)) + " " + label +
                            " takes the variant from " + std::to_string(before) + " to " +
                            std::to_string(after) + " at [" +
                            sem::format_state(c, concrete) + "]",
                   path_of(id));
          }

          std::vector<State> matched, unguarded;
          if (x) {
            for (auto& [a2, g] : abstract_after(*x, a)) {
              if (!glued(f.target, a2)) continue;
              (g ? matched : unguarded).push_back(a2);
            }
          } else if (glued(f.target, a)) {
            matched.push_back(a);
          }
          if (matched.empty() && unguarded.empty()) {
            fail(INV, label + " from " + pair_text(c, a) + " reaches [" +
                          sem::format_state(f.target, concrete) + "] with no abstract " +
                          (x ? x->name + " step" : std::string("state (new event, skip)")) +
                          " satisfying J",
                 path_of(id));
            continue;
          }
          for (auto& a2 : matched.empty() ? unguarded : matched)
            intern(f.target, a2, std::make_pair(id, e.name));
        }
      }
    }
  }
  rep.pairs = pairs.size();
  return rep;
}

}  // namespace ebltl::refine
