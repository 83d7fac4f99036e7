#pragma once

#include <algorithm>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "ebltl/formula.hpp"
#include "ebltl/ltl/trace.hpp"
#include "ebltl/refine/chain.hpp"
#include "ebltl/refine/po.hpp"
#include "ebltl/refine/strategy.hpp"
#include "ebltl/sem/explore.hpp"

namespace ebltl::refine {

struct CAVerdict {
  bool holds = true;
  std::optional<ltl::Trace> witness;  // lasso whose cycle has C but no O
};

namespace detail {

/// Component id per vertex (iterative Tarjan).
inline std::vector<size_t> scc(const std::vector<std::vector<size_t>>& adj) {
  const size_t none = static_cast<size_t>(-1);
  size_t n = adj.size(), counter = 0, ncomp = 0;
  std::vector<size_t> idx(n, none), low(n, 0), comp(n, none), stack;
  std::vector<bool> on(n, false);
  for (size_t s = 0; s < n; ++s) {
    if (idx[s] != none) continue;
    std::vector<std::pair<size_t, size_t>> call{{s, 0}};
    idx[s] = low[s] = counter++;
    stack.push_back(s);
    on[s] = true;
    while (!call.empty()) {
      auto& [v, i] = call.back();
      if (i < adj[v].size()) {
        size_t w = adj[v][i++];
        if (idx[w] == none) {
          idx[w] = low[w] = counter++;
          stack.push_back(w);
          on[w] = true;
          call.push_back({w, 0});
        } else if (on[w]) {
          low[v] = std::min(low[v], idx[w]);
        }
        continue;
      }
      size_t u = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[u]);
      if (low[u] == idx[u]) {
        size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on[w] = false;
          comp[w] = ncomp;
        } while (w != u);
        ++ncomp;
      }
    }
  }
  return comp;
}

}  // namespace detail

/// CA(C, O) on a finite graph: no reachable cycle carries a C edge and no
/// O edge. Decided on the subgraph without O edges.
inline CAVerdict check_ca(const sem::StateGraph& g, const EventSet& C, const EventSet& O) {
  CAVerdict v;
  if (C.empty()) return v;
  size_t n = g.states.size();
  std::vector<std::vector<size_t>> adj(n), kept(n);  // kept: edge ids
  for (size_t e = 0; e < g.edges.size(); ++e) {
    if (O.count(g.edges[e].event)) continue;
    adj[g.edges[e].source].push_back(g.edges[e].target);
    kept[g.edges[e].source].push_back(e);
  }
  auto comp = detail::scc(adj);

  // Shallowest source first so the witness prefix is short.
  std::optional<size_t> bad;
  for (size_t e = 0; e < g.edges.size(); ++e) {
    const auto& ed = g.edges[e];
    if (!C.count(ed.event) || O.count(ed.event) || comp[ed.source] != comp[ed.target]) continue;
    if (!bad || g.path_to(ed.source).size() < g.path_to(g.edges[*bad].source).size()) bad = e;
  }
  if (!bad) return v;

  const auto& ed = g.edges[*bad];
  std::vector<size_t> cycle{*bad};
  if (ed.target != ed.source) {
    std::vector<std::optional<size_t>> prev(n);
    std::vector<bool> seen(n, false);
    std::deque<size_t> q{ed.target};
    seen[ed.target] = true;
    while (!q.empty() && !seen[ed.source]) {
      size_t s = q.front();
      q.pop_front();
      for (size_t e : kept[s]) {
        size_t t = g.edges[e].target;
        if (seen[t] || comp[t] != comp[ed.source]) continue;
        seen[t] = true;
        prev[t] = e;
        q.push_back(t);
      }
    }
    std::vector<size_t> back;
    for (size_t s = ed.source; prev[s]; s = g.edges[*prev[s]].source) back.push_back(*prev[s]);
    cycle.insert(cycle.end(), back.rbegin(), back.rend());
  }
  v.holds = false;
  v.witness = ltl::Trace::lasso(g.events_on(g.path_to(ed.source)), g.events_on(cycle));
  return v;
}

struct Theorem1Report {
  std::vector<EventSet> convergent_images;  // g_{i+1,n}^{-1}(C_i) per level
  EventSet c_star;
  EventSet o_star;
  bool strategy_ok = false;
  bool pos_ok = false;
  bool asserted = false;  // hypotheses hold, so the theorem claims CA
  CAVerdict direct;
  bool consistent() const { return !asserted || direct.holds; }
  bool holds() const { return asserted && direct.holds; }
};

/// C* and O* for the final machine of the chain.
inline std::pair<EventSet, EventSet> theorem1_sets(const RefinementChain& chain,
                                                   std::vector<EventSet>* per_level = nullptr) {
  EventSet c_star, o_star;
  size_t n = chain.n();
  for (size_t i = 0; i <= n; ++i) {
    EventSet img = compose_renamings(chain, i + 1).preimage(chain.labels(i).convergent);
    if (per_level) per_level->push_back(img);
    c_star.insert(img.begin(), img.end());
  }
  o_star = compose_renamings(chain, 1).preimage(chain.labels(0).ordinary);
  return {c_star, o_star};
}

/// Theorem-level claim (from strategy rules and pair POs) next to the direct
/// CA check on M_n's graph. `pos` may carry already computed pair reports.
inline Theorem1Report check_theorem1(const RefinementChain& chain, const sem::StateGraph& gn,
                                     std::vector<POReport> pos = {}, sem::Limits limits = {}) {
  Theorem1Report r;
  auto [c, o] = theorem1_sets(chain, &r.convergent_images);
  r.c_star = c;
  r.o_star = o;
  r.strategy_ok = check_strategy(chain).holds();
  if (pos.empty())
    for (size_t i = 1; i <= chain.n(); ++i)
      pos.push_back(check_refinement_pair(chain.machines[i - 1], chain.machines[i],
                                          chain.links[i - 1], limits));
  r.pos_ok = std::all_of(pos.begin(), pos.end(), [](const POReport& p) { return p.all_hold(); });
  r.asserted = r.strategy_ok && r.pos_ok;
  r.direct = check_ca(gn, r.c_star, r.o_star);
  return r;
}

}  // namespace ebltl::refine
