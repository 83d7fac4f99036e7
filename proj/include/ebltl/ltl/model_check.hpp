#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ebltl/error.hpp"
#include "ebltl/formula.hpp"
#include "ebltl/ltl/evaluate.hpp"
#include "ebltl/ltl/tableau.hpp"
#include "ebltl/ltl/trace.hpp"
#include "ebltl/sem/explore.hpp"

namespace ebltl::ltl {

struct Verdict {
  bool holds = true;
  std::optional<Trace> counterexample;
  std::string method;
  std::vector<std::string> warnings;
  size_t product_states = 0;
};

struct CheckLimits {
  size_t max_product_states = 2000000;
};

/// Atoms of φ that are not events of the graph's alphabet.
inline std::vector<std::string> foreign_atoms(const sem::StateGraph& g, const Formula& phi) {
  std::vector<std::string> out;
  for (const auto& a : alphabet(phi))
    if (std::find(g.alphabet.begin(), g.alphabet.end(), a) == g.alphabet.end())
      out.push_back(a);
  return out;
}

namespace detail {

struct Product {
  struct Arc {
    size_t target;
    size_t edge;  // graph edge index
  };
  std::vector<std::pair<size_t, int>> states;  // (graph state, tableau state)
  std::vector<std::vector<Arc>> arcs;
  std::vector<std::optional<std::pair<size_t, size_t>>> parent;  // (product state, edge)
  std::vector<size_t> depth;
};

inline std::vector<size_t> tarjan(const Product& p, std::vector<size_t>& comp) {
  size_t n = p.states.size();
  const size_t none = static_cast<size_t>(-1);
  std::vector<size_t> idx(n, none), low(n, 0), stack, roots;
  std::vector<bool> on(n, false);
  comp.assign(n, none);
  size_t counter = 0, ncomp = 0;
  struct Frame {
    size_t v, i;
  };
  for (size_t s = 0; s < n; ++s) {
    if (idx[s] != none) continue;
    std::vector<Frame> call{{s, 0}};
    idx[s] = low[s] = counter++;
    stack.push_back(s);
    on[s] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.i < p.arcs[f.v].size()) {
        size_t w = p.arcs[f.v][f.i++].target;
        if (idx[w] == none) {
          idx[w] = low[w] = counter++;
          stack.push_back(w);
          on[w] = true;
          call.push_back({w, 0});
        } else if (on[w]) {
          low[f.v] = std::min(low[f.v], idx[w]);
        }
        continue;
      }
      size_t v = f.v;
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
      if (low[v] == idx[v]) {
        size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on[w] = false;
          comp[w] = ncomp;
        } while (w != v);
        roots.push_back(v);
        ++ncomp;
      }
    }
  }
  return roots;
}

struct Step {
  size_t edge;
  size_t state;
};

/// Shortest path inside component `comp[from]` from `from` to a state
/// satisfying `goal`. Non-empty unless `allow_empty` and `from` is a goal.
template <class Goal>
inline std::optional<std::vector<Step>> path_in_component(const Product& p,
                                                          const std::vector<size_t>& comp,
                                                          size_t from, Goal goal,
                                                          bool allow_empty) {
  if (allow_empty && goal(from)) return std::vector<Step>{};
  std::unordered_map<size_t, std::pair<size_t, size_t>> prev;  // state -> (pred, edge)
  std::deque<size_t> q{from};
  bool first = true;
  while (!q.empty()) {
    size_t v = q.front();
    q.pop_front();
    if (!first && v == from) continue;
    first = false;
    for (const auto& arc : p.arcs[v]) {
      if (comp[arc.target] != comp[from] || prev.count(arc.target)) continue;
      prev[arc.target] = {v, arc.edge};
      if (goal(arc.target)) {
        std::vector<Step> steps;
        size_t cur = arc.target;
        do {
          auto [pr, e] = prev.at(cur);
          steps.push_back({e, cur});
          cur = pr;
        } while (cur != from);
        std::reverse(steps.begin(), steps.end());
        return steps;
      }
      q.push_back(arc.target);
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// Decides whether every maximal trace of the graph satisfies φ. Builds a
/// tableau automaton for ¬φ, explores its product with the graph, and looks
/// for an accepting cycle (infinite counterexample) or a path to a deadlock
/// after which the automaton can accept the padding word (finite
/// counterexample). The shortest counterexample found is returned.
inline Verdict model_check(const sem::StateGraph& g, const Formula& phi,
                           CheckLimits limits = {}) {
  Verdict v;
  v.method = "automaton-product";
  for (const auto& a : foreign_atoms(g, phi))
    v.warnings.push_back("atom [" + a + "] is not an event of the machine and never occurs");

  NnfTable table;
  int root = table.add(phi, true);
  Tableau aut = build_tableau(table, root);
  std::vector<bool> pad_ok = padding_accepting(aut);

  std::map<std::string, int> letter_of;
  for (size_t i = 0; i < table.atoms().size(); ++i)
    letter_of[table.atoms()[i]] = static_cast<int>(i);
  std::vector<int> edge_letter(g.edges.size(), -1);
  for (size_t e = 0; e < g.edges.size(); ++e) {
    auto it = letter_of.find(g.edges[e].event);
    if (it != letter_of.end()) edge_letter[e] = it->second;
  }
  std::vector<bool> is_deadlock(g.states.size(), false);
  for (size_t d : g.deadlocks) is_deadlock[d] = true;

  // Breadth-first product construction.
  detail::Product p;
  const size_t nq = aut.states.size();
  std::unordered_map<size_t, size_t> index;
  std::deque<size_t> queue;
  auto intern = [&](size_t s, int q, std::optional<std::pair<size_t, size_t>> par) {
    size_t key = s * nq + static_cast<size_t>(q);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    if (p.states.size() >= limits.max_product_states)
      throw LimitError("product limit of " + std::to_string(limits.max_product_states) +
                       " states exceeded");
    size_t id = p.states.size();
    p.states.push_back({s, q});
    p.arcs.emplace_back();
    p.parent.push_back(par);
    p.depth.push_back(par ? p.depth[par->first] + 1 : 0);
    index.emplace(key, id);
    queue.push_back(id);
    return id;
  };
  for (size_t s0 : g.initial) intern(s0, 0, std::nullopt);

  std::optional<size_t> finite_end;
  while (!queue.empty()) {
    size_t id = queue.front();
    queue.pop_front();
    auto [s, q] = p.states[id];
    if (is_deadlock[s] && pad_ok[q] && !finite_end) finite_end = id;
    for (size_t e : g.out[s]) {
      for (int r : aut.succ[q]) {
        if (!aut.accepts(r, edge_letter[e])) continue;
        size_t t = intern(g.edges[e].target, r, std::make_pair(id, e));
        p.arcs[id].push_back({t, e});
      }
    }
  }
  v.product_states = p.states.size();

  auto prefix_events = [&](size_t id) {
    std::vector<std::string> ev;
    while (p.parent[id]) {
      ev.push_back(g.edges[p.parent[id]->second].event);
      id = p.parent[id]->first;
    }
    return std::vector<std::string>(ev.rbegin(), ev.rend());
  };

  std::optional<Trace> best;
  auto length = [](const Trace& t) { return t.prefix.size() + t.cycle.size(); };
  if (finite_end) best = Trace::finite(prefix_events(*finite_end));

  std::vector<size_t> comp;
  detail::tarjan(p, comp);
  size_t ncomp = 0;
  for (size_t c : comp) ncomp = std::max(ncomp, c + 1);
  std::vector<std::vector<size_t>> members(ncomp);
  for (size_t i = 0; i < p.states.size(); ++i) members[comp[i]].push_back(i);

  for (size_t c = 0; c < ncomp; ++c) {
    const auto& mem = members[c];
    bool cyclic = mem.size() > 1;
    if (!cyclic)
      for (const auto& arc : p.arcs[mem[0]]) cyclic = cyclic || arc.target == mem[0];
    if (!cyclic) continue;
    bool fair = true;
    for (size_t set = 0; set < aut.untils.size() && fair; ++set) {
      bool hit = false;
      for (size_t m : mem) hit = hit || aut.fair_member(p.states[m].second, set);
      fair = hit;
    }
    if (!fair) continue;

    size_t entry = *std::min_element(mem.begin(), mem.end(), [&](size_t a, size_t b) {
      return p.depth[a] != p.depth[b] ? p.depth[a] < p.depth[b] : a < b;
    });
    std::vector<size_t> cycle_edges;
    size_t cur = entry;
    std::vector<bool> covered(aut.untils.size(), false);
    auto cover = [&](size_t st) {
      for (size_t set = 0; set < covered.size(); ++set)
        if (aut.fair_member(p.states[st].second, set)) covered[set] = true;
    };
    cover(entry);
    for (size_t set = 0; set < aut.untils.size(); ++set) {
      if (covered[set]) continue;
      auto step = detail::path_in_component(
          p, comp, cur, [&](size_t st) { return aut.fair_member(p.states[st].second, set); },
          false);
      if (!step) throw Error("internal error: fair component without a covering path");
      for (const auto& st : *step) {
        cover(st.state);
        cycle_edges.push_back(st.edge);
      }
      cur = step->back().state;
    }
    auto back = detail::path_in_component(
        p, comp, cur, [&](size_t st) { return st == entry; }, !cycle_edges.empty());
    if (!back) throw Error("internal error: cannot close an accepting cycle");
    for (const auto& st : *back) cycle_edges.push_back(st.edge);

    std::vector<std::string> cyc;
    for (size_t e : cycle_edges) cyc.push_back(g.edges[e].event);
    Trace t = Trace::lasso(prefix_events(entry), cyc);
    if (!best || length(t) < length(*best)) best = t;
  }

  if (best) {
    v.holds = false;
    v.counterexample = best;
  }
  return v;
}

}  // namespace ebltl::ltl
