#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ebltl/dsl/ast.hpp"
#include "ebltl/error.hpp"
#include "ebltl/sem/eval.hpp"

namespace ebltl::sem {

struct Limits {
  size_t max_states = 100000;
};

struct Edge {
  size_t source = 0;
  std::string event;
  std::vector<Value> params;  // full frame, see frame_names
  size_t target = 0;
};

/// Explicit reachable transition system. Built by explore(), or by hand with
/// add_state/add_edge followed by finish() (the machine is then optional).
struct StateGraph {
  std::shared_ptr<const dsl::MachineAST> machine;
  std::vector<State> states;
  std::vector<size_t> initial;
  std::vector<Edge> edges;
  std::vector<size_t> deadlocks;
  Limits limits;

  // Derived by finish().
  std::vector<std::vector<size_t>> out;   // outgoing edge indices per state
  std::vector<std::string> alphabet;      // machine events, or edge labels
  std::vector<std::optional<size_t>> parent;  // BFS tree edge reaching a state

  size_t add_state(State s) {
    states.push_back(std::move(s));
    return states.size() - 1;
  }
  void add_edge(size_t src, std::string event, size_t tgt, std::vector<Value> params = {}) {
    edges.push_back({src, std::move(event), std::move(params), tgt});
  }

  /// Recomputes adjacency, deadlocks, alphabet and BFS parents.
  void finish() {
    out.assign(states.size(), {});
    for (size_t i = 0; i < edges.size(); ++i) out[edges[i].source].push_back(i);
    deadlocks.clear();
    for (size_t s = 0; s < states.size(); ++s)
      if (out[s].empty()) deadlocks.push_back(s);
    alphabet.clear();
    if (machine) {
      alphabet = machine->alphabet();
    } else {
      std::set<std::string> seen;
      for (const auto& e : edges)
        if (seen.insert(e.event).second) alphabet.push_back(e.event);
    }
    parent.assign(states.size(), std::nullopt);
    std::vector<bool> seen(states.size(), false);
    std::deque<size_t> q;
    for (size_t s : initial)
      if (!seen[s]) seen[s] = true, q.push_back(s);
    while (!q.empty()) {
      size_t s = q.front();
      q.pop_front();
      for (size_t ei : out[s]) {
        size_t t = edges[ei].target;
        if (!seen[t]) {
          seen[t] = true;
          parent[t] = ei;
          q.push_back(t);
        }
      }
    }
  }

  bool is_initial(size_t s) const {
    return std::find(initial.begin(), initial.end(), s) != initial.end();
  }

  /// Edge indices of a shortest path from an initial state to `s`.
  std::vector<size_t> path_to(size_t s) const {
    std::vector<size_t> path;
    while (parent[s]) {
      path.push_back(*parent[s]);
      s = edges[*parent[s]].source;
    }
    return {path.rbegin(), path.rend()};
  }

  std::vector<std::string> events_on(const std::vector<size_t>& path) const {
    std::vector<std::string> ev;
    for (size_t e : path) ev.push_back(edges[e].event);
    return ev;
  }

  std::string state_text(size_t s) const {
    if (machine) return format_state(states[s], *machine);
    std::string t = "#" + std::to_string(s);
    return t;
  }
};

/// Raised when exploration meets an invariant or domain violation. `path`
/// is the event sequence from an initial state; its length is the depth.
class ExplorationError : public Error {
 public:
  ExplorationError(const std::string& what, std::vector<std::string> path, std::string state)
      : Error(what), path_(std::move(path)), state_(std::move(state)) {}
  const std::vector<std::string>& path() const { return path_; }
  size_t depth() const { return path_.size(); }
  const std::string& state() const { return state_; }

 private:
  std::vector<std::string> path_;
  std::string state_;
};

namespace detail {

inline std::string violation(const dsl::MachineAST& m, const State& s) {
  for (size_t i = 0; i < s.size(); ++i)
    if (!in_domain(m.variables[i].type, s[i], m))
      return "variable '" + m.variables[i].name + "' leaves its domain (value " +
             std::to_string(s[i]) + ")";
  return "invariant violated";
}

}  // namespace detail

/// Breadth-first closure of the initial states under all enabled
/// (event, parameter) pairs. States are numbered in discovery order; events
/// are tried in declaration order and parameters lexicographically.
inline StateGraph explore(const dsl::MachineAST& m, Limits limits = {}) {
  StateGraph g;
  g.machine = std::make_shared<const dsl::MachineAST>(m);
  g.limits = limits;
  std::map<State, size_t> index;
  std::vector<std::optional<size_t>> parent;

  auto path_of = [&](std::optional<size_t> edge) {
    std::vector<std::string> ev;
    while (edge) {
      ev.push_back(g.edges[*edge].event);
      edge = parent[g.edges[*edge].source];
    }
    return std::vector<std::string>(ev.rbegin(), ev.rend());
  };
  auto intern = [&](const State& s, std::optional<size_t> via) -> size_t {
    auto it = index.find(s);
    if (it != index.end()) return it->second;
    if (!state_ok(m, s)) {
      auto path = path_of(via);
      throw ExplorationError(detail::violation(m, s) + " after " +
                                 std::to_string(path.size()) + " step(s) at " +
                                 format_state(s, m),
                             path, format_state(s, m));
    }
    if (g.states.size() >= limits.max_states)
      throw LimitError("state limit of " + std::to_string(limits.max_states) + " exceeded");
    size_t id = g.add_state(s);
    index.emplace(s, id);
    parent.push_back(via ? std::optional<size_t>(*via) : std::nullopt);
    return id;
  };

  for (auto& f : apply_actions(m, m.init, State(m.variables.size(), 0), {})) {
    size_t id = intern(f.target, std::nullopt);
    if (!g.is_initial(id)) g.initial.push_back(id);
  }

  for (size_t s = 0; s < g.states.size(); ++s) {
    for (const auto& ev : m.events) {
      for (auto& f : successors(m, ev, g.states[s])) {
        g.edges.push_back({s, ev.name, f.frame, 0});
        size_t ei = g.edges.size() - 1;
        auto it = index.find(f.target);
        if (it != index.end()) {
          g.edges[ei].target = it->second;
        } else {
          g.edges[ei].target = intern(f.target, ei);
        }
      }
    }
  }
  g.finish();
  return g;
}

struct InvariantVerdict {
  bool holds = true;
  std::optional<size_t> state;
  std::string message;
};

/// Re-evaluates domains and the invariant on every state.
inline InvariantVerdict check_invariant(const StateGraph& g) {
  if (!g.machine) return {};
  for (size_t s = 0; s < g.states.size(); ++s) {
    if (!state_ok(*g.machine, g.states[s]))
      return {false, s, detail::violation(*g.machine, g.states[s]) + " at " + g.state_text(s)};
  }
  return {};
}

struct DeadlockVerdict {
  bool holds = true;
  std::optional<size_t> state;
  std::vector<std::string> path;
};

/// Deadlock freedom; on failure the shallowest deadlock and a path to it.
inline DeadlockVerdict check_deadlock_free(const StateGraph& g) {
  if (g.deadlocks.empty()) return {};
  size_t best = g.deadlocks.front();
  for (size_t d : g.deadlocks)
    if (g.path_to(d).size() < g.path_to(best).size()) best = d;
  return {false, best, g.events_on(g.path_to(best))};
}

/// One `source event target` line per edge.
inline std::string to_edge_list(const StateGraph& g) {
  std::ostringstream os;
  for (const auto& e : g.edges) os << e.source << ' ' << e.event << ' ' << e.target << '\n';
  return os.str();
}

}  // namespace ebltl::sem
