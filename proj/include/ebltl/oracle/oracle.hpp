#pragma once

// Brute-force reference implementations for differential testing. Nothing
// here uses the ltl evaluator or the automaton construction.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "ebltl/error.hpp"
#include "ebltl/formula.hpp"
#include "ebltl/ltl/model_check.hpp"  // Verdict only
#include "ebltl/ltl/trace.hpp"
#include "ebltl/sem/explore.hpp"

namespace ebltl::oracle {

using ltl::Trace;

/// Satisfaction by direct quantification over suffix positions. Each
/// subformula gets a table over the distinct suffixes, filled bottom-up; U,
/// F and G scan forward along the successor function until a position
/// repeats.
inline bool oracle_holds_on(const Trace& u, const Formula& phi) {
  const size_t len = u.prefix.size() + u.cycle.size();
  const size_t n = u.is_lasso() ? len : len + 1;
  auto next = [&](size_t i) {
    if (u.is_lasso()) return i + 1 < len ? i + 1 : u.prefix.size();
    return i < len ? i + 1 : len;
  };
  auto letter = [&](size_t i) -> const std::string* {
    if (i < u.prefix.size()) return &u.prefix[i];
    if (u.is_lasso()) return &u.cycle[i - u.prefix.size()];
    return nullptr;  // empty suffix of a finite trace
  };

  std::vector<Formula> subs;
  phi.post_order(subs);
  std::vector<std::vector<char>> table;
  auto find = [&](const Formula& f, size_t upto) -> const std::vector<char>& {
    for (size_t k = upto; k-- > 0;)
      if (subs[k] == f) return table[k];
    throw Error("internal error: subformula not tabulated");
  };
  using K = Formula::Kind;
  for (size_t k = 0; k < subs.size(); ++k) {
    const Formula& f = subs[k];
    std::vector<char> col(n, 0);
    for (size_t i = 0; i < n; ++i) {
      switch (f.kind()) {
        case K::True:
          col[i] = 1;
          break;
        case K::Atom: {
          const std::string* x = letter(i);
          col[i] = x && *x == f.event();
          break;
        }
        case K::Not:
          col[i] = !find(f.operand(), k)[i];
          break;
        case K::Or:
          col[i] = find(f.lhs(), k)[i] || find(f.rhs(), k)[i];
          break;
        case K::And:
          col[i] = find(f.lhs(), k)[i] && find(f.rhs(), k)[i];
          break;
        case K::Finally:
        case K::Globally:
        case K::Until: {
          // Walk u^i, u^{i+1}, ... ; n steps visit every reachable suffix.
          bool result = f.kind() == K::Globally;
          size_t j = i;
          for (size_t step = 0; step <= n; ++step, j = next(j)) {
            if (f.kind() == K::Finally && find(f.operand(), k)[j]) {
              result = true;
              break;
            }
            if (f.kind() == K::Globally && !find(f.operand(), k)[j]) {
              result = false;
              break;
            }
            if (f.kind() == K::Until) {
              if (find(f.rhs(), k)[j]) {
                result = true;
                break;
              }
              if (!find(f.lhs(), k)[j]) break;
            }
          }
          col[i] = result;
          break;
        }
      }
    }
    table.push_back(std::move(col));
  }
  return table.back()[0];
}

struct OracleBounds {
  size_t visits = 1;             // times a state may recur on one enumerated walk
  size_t max_walks = 20000;      // walk budget before falling back to the Hintikka search
  size_t max_nodes = 4000000;    // Hintikka product budget; exceeding it withholds the verdict
};

namespace detail {

/// Graph with letters outside `keep` renamed to a silent letter and
/// strongly bisimilar states merged. Same word set as the input.
struct Quotient {
  std::vector<std::vector<std::pair<std::string, size_t>>> out;  // (letter, target)
  std::vector<size_t> initial;
};

inline Quotient bisimulation_quotient(const sem::StateGraph& g, const EventSet& keep,
                                      const std::string& silent) {
  size_t n = g.states.size();
  auto label = [&](const std::string& e) { return keep.count(e) ? e : silent; };
  std::vector<size_t> block(n, 0);
  size_t blocks = 1;
  while (true) {
    std::map<std::pair<size_t, std::set<std::pair<std::string, size_t>>>, size_t> ids;
    std::vector<size_t> fresh(n);
    for (size_t s = 0; s < n; ++s) {
      std::set<std::pair<std::string, size_t>> sig;
      for (size_t e : g.out[s]) sig.insert({label(g.edges[e].event), block[g.edges[e].target]});
      auto key = std::make_pair(block[s], std::move(sig));
      auto it = ids.find(key);
      if (it == ids.end()) it = ids.emplace(std::move(key), ids.size()).first;
      fresh[s] = it->second;
    }
    bool stable = ids.size() == blocks;
    block = std::move(fresh);
    blocks = ids.size();
    if (stable) break;
  }
  Quotient q;
  q.out.resize(blocks);
  std::vector<std::set<std::pair<std::string, size_t>>> seen(blocks);
  for (const auto& e : g.edges) {
    std::pair<std::string, size_t> arc{label(e.event), block[e.target]};
    if (seen[block[e.source]].insert(arc).second) q.out[block[e.source]].push_back(arc);
  }
  std::set<size_t> init;
  for (size_t s : g.initial) init.insert(block[s]);
  q.initial.assign(init.begin(), init.end());
  return q;
}

/// Shortest representation: primitive cycle, prefix rolled back into it.
inline Trace normalize(Trace t) {
  if (!t.is_lasso()) return t;
  auto& c = t.cycle;
  for (size_t d = 1; d < c.size(); ++d) {
    if (c.size() % d) continue;
    bool power = true;
    for (size_t i = d; i < c.size() && power; ++i) power = c[i] == c[i - d];
    if (power) {
      c.resize(d);
      break;
    }
  }
  while (!t.prefix.empty() && t.prefix.back() == c.back()) {
    t.prefix.pop_back();
    std::rotate(c.begin(), c.end() - 1, c.end());
  }
  return t;
}

inline std::string key_of(const Trace& t) {
  std::string k = t.is_lasso() ? "L" : "F";
  for (const auto& e : t.prefix) k += e + ",";
  k += "|";
  for (const auto& e : t.cycle) k += e + ",";
  return k;
}

}  // namespace detail


namespace detail {

/// Simple-lasso enumeration on the quotient. Returns a refuting trace, or
/// nothing; `complete` tells whether the walk budget sufficed.
inline std::optional<Trace> enumerate_lassos(const Quotient& q, const Formula& phi,
                                             const OracleBounds& bounds, bool& complete,
                                             size_t& words) {
  std::unordered_set<std::string> checked;
  std::optional<Trace> bad;
  size_t walks = 0;
  complete = true;
  std::vector<size_t> path_states, visits(q.out.size(), 0);
  std::vector<std::string> path_events;
  auto test = [&](Trace t) {
    t = normalize(std::move(t));
    if (checked.insert(key_of(t)).second && !oracle_holds_on(t, phi)) bad = t;
  };
  for (size_t s0 : q.initial) {
    std::vector<std::pair<size_t, size_t>> stack{{s0, 0}};
    path_states = {s0};
    path_events.clear();
    std::fill(visits.begin(), visits.end(), 0);
    visits[s0] = 1;
    if (q.out[s0].empty()) test(Trace::finite({}));
    while (!stack.empty() && !bad) {
      auto& [s, i] = stack.back();
      if (i == q.out[s].size()) {
        --visits[s];
        stack.pop_back();
        path_states.pop_back();
        if (!path_events.empty()) path_events.pop_back();
        continue;
      }
      const auto& [letter, t] = q.out[s][i++];
      if (++walks > bounds.max_walks) {
        complete = false;
        break;
      }
      path_events.push_back(letter);
      for (size_t k = 0; k < path_states.size() && !bad; ++k)
        if (path_states[k] == t)
          test(Trace::lasso({path_events.begin(), path_events.begin() + k},
                            {path_events.begin() + k, path_events.end()}));
      if (q.out[t].empty() && !bad) test(Trace::finite(path_events));
      if (visits[t] < bounds.visits && !q.out[t].empty() && !bad) {
        ++visits[t];
        stack.push_back({t, 0});
        path_states.push_back(t);
      } else {
        path_events.pop_back();
      }
    }
    if (bad || !complete) break;
  }
  words = checked.size();
  return bad;
}

/// Closure-based search for a run violating φ: product nodes pair a graph
/// state with a guess of which temporal subformulas hold at the current
/// position; consecutive guesses must satisfy the one-step unfolding laws
/// and a cycle must discharge every eventuality somewhere.
class HintikkaSearch {
 public:
  HintikkaSearch(const Quotient& q, const Formula& phi, size_t max_nodes)
      : q_(q), max_nodes_(max_nodes) {
    std::vector<Formula> all;
    phi.post_order(all);
    for (const auto& f : all) index_of(f);
    root_ = index_of(phi);
    if (temporal_.size() > 30)
      throw LimitError("formula has more than 30 temporal subformulas; oracle verdict withheld");
    full_ = temporal_.empty() ? 0 : (std::uint32_t(-1) >> (32 - temporal_.size()));
    // The empty suffix is its own successor, so each temporal operator
    // takes the value of its (right) operand there. Subformulas come
    // children first, so one pass suffices.
    bottom_ = 0;
    for (size_t b = 0; b < temporal_.size(); ++b) {
      const Sub& s = subs_[temporal_[b]];
      auto v = local(nullptr, bottom_);
      if (s.kind == Formula::Kind::Until ? v[s.rhs] : v[s.lhs]) bottom_ |= 1u << b;
    }
  }

  std::optional<Trace> run() {
    std::optional<Trace> finite_cex;
    for (size_t s0 : q_.initial) {
      if (q_.out[s0].empty()) {
        if (!local(nullptr, bottom_)[root_]) return Trace::finite({});
        continue;
      }
      for (std::uint64_t a = 0; a <= full_; ++a) {
        auto va = local_for(s0, static_cast<std::uint32_t>(a));
        for (size_t k = 0; k < q_.out[s0].size(); ++k) {
          if (va[k][root_]) continue;
          const auto& [letter, t] = q_.out[s0][k];
          for (std::uint32_t b : next_guesses(va[k], static_cast<std::uint32_t>(a), t))
            intern(t, b, std::nullopt, letter);
        }
      }
    }
    for (size_t head = 0; head < nodes_.size(); ++head) {
      auto [s, a] = nodes_[head];
      if (q_.out[s].empty()) {
        if (!finite_cex) finite_cex = Trace::finite(path_to(head));
        continue;
      }
      auto va = local_for(s, a);
      for (size_t k = 0; k < q_.out[s].size(); ++k) {
        const auto& [letter, t] = q_.out[s][k];
        std::uint32_t done = discharged(va[k], a);
        for (std::uint32_t b : next_guesses(va[k], a, t)) {
          size_t v = intern(t, b, head, letter);
          arcs_[head].push_back({v, letter, done});
        }
      }
    }
    std::optional<Trace> best = finite_cex;
    auto lasso = fair_lasso();
    if (lasso && (!best || lasso->prefix.size() + lasso->cycle.size() < best->prefix.size()))
      best = lasso;
    return best;
  }

  size_t nodes() const { return nodes_.size(); }

 private:
  struct Sub {
    Formula::Kind kind;
    std::string event;
    size_t lhs = 0, rhs = 0;
    int bit = -1;
  };
  struct Arc {
    size_t target;
    std::string letter;
    std::uint32_t done;
  };

  size_t index_of(const Formula& f) {
    for (size_t i = 0; i < forms_.size(); ++i)
      if (forms_[i] == f) return i;
    Sub s{f.kind(), f.kind() == Formula::Kind::Atom ? f.event() : "", 0, 0, -1};
    if (f.is_binary()) {
      s.lhs = index_of(f.lhs());
      s.rhs = index_of(f.rhs());
    } else if (f.is_unary()) {
      s.lhs = index_of(f.operand());
    }
    using K = Formula::Kind;
    if (f.kind() == K::Until || f.kind() == K::Finally || f.kind() == K::Globally) {
      s.bit = static_cast<int>(temporal_.size());
      temporal_.push_back(forms_.size());
    }
    forms_.push_back(f);
    subs_.push_back(s);
    return forms_.size() - 1;
  }

  /// Truth of every subformula at a position with this letter (null for the
  /// empty suffix) and this guess for the temporal ones.
  std::vector<char> local(const std::string* letter, std::uint32_t guess) const {
    std::vector<char> v(subs_.size(), 0);
    using K = Formula::Kind;
    for (size_t i = 0; i < subs_.size(); ++i) {
      const Sub& s = subs_[i];
      switch (s.kind) {
        case K::True:
          v[i] = 1;
          break;
        case K::Atom:
          v[i] = letter && *letter == s.event;
          break;
        case K::Not:
          v[i] = !v[s.lhs];
          break;
        case K::Or:
          v[i] = v[s.lhs] || v[s.rhs];
          break;
        case K::And:
          v[i] = v[s.lhs] && v[s.rhs];
          break;
        default:
          v[i] = (guess >> s.bit) & 1u;
      }
    }
    return v;
  }

  std::vector<std::vector<char>> local_for(size_t s, std::uint32_t guess) const {
    std::vector<std::vector<char>> out;
    for (const auto& arc : q_.out[s]) out.push_back(local(&arc.first, guess));
    return out;
  }

  /// Guesses for the next position compatible with the current one.
  std::vector<std::uint32_t> next_guesses(const std::vector<char>& v, std::uint32_t a,
                                          size_t target) const {
    std::uint32_t forced = 0, value = 0;
    using K = Formula::Kind;
    for (size_t b = 0; b < temporal_.size(); ++b) {
      const Sub& s = subs_[temporal_[b]];
      bool cur = (a >> b) & 1u;
      bool now = s.kind == K::Until ? v[s.rhs] : v[s.lhs];
      bool keep = s.kind == K::Until ? v[s.lhs] : true;
      if (s.kind == K::Globally) {
        if (!now) {
          if (cur) return {};
        } else {
          forced |= 1u << b;
          if (cur) value |= 1u << b;
        }
        continue;
      }
      if (now) {
        if (!cur) return {};
      } else if (keep) {
        forced |= 1u << b;
        if (cur) value |= 1u << b;
      } else if (cur) {
        return {};
      }
    }
    std::vector<std::uint32_t> out;
    if (q_.out[target].empty()) {
      if ((bottom_ & forced) == value) out.push_back(bottom_);
      return out;
    }
    std::uint32_t free = full_ & ~forced;
    for (std::uint32_t sub = free;; sub = (sub - 1) & free) {
      out.push_back(value | sub);
      if (sub == 0) break;
    }
    return out;
  }

  /// Eventualities not pending at this position.
  std::uint32_t discharged(const std::vector<char>& v, std::uint32_t a) const {
    std::uint32_t m = 0;
    using K = Formula::Kind;
    for (size_t b = 0; b < temporal_.size(); ++b) {
      const Sub& s = subs_[temporal_[b]];
      bool cur = (a >> b) & 1u;
      bool pending = s.kind == K::Until    ? cur && !v[s.rhs]
                     : s.kind == K::Finally ? cur && !v[s.lhs]
                                            : !cur && v[s.lhs];
      if (!pending) m |= 1u << b;
    }
    return m;
  }

  size_t intern(size_t s, std::uint32_t a, std::optional<size_t> parent,
                const std::string& letter) {
    auto key = std::make_pair(s, a);
    auto it = ids_.find(key);
    if (it != ids_.end()) return it->second;
    if (nodes_.size() >= max_nodes_)
      throw LimitError("oracle product budget of " + std::to_string(max_nodes_) +
                       " nodes exhausted; verdict withheld");
    ids_.emplace(key, nodes_.size());
    nodes_.push_back(key);
    parent_.push_back({parent, letter});
    arcs_.emplace_back();
    return nodes_.size() - 1;
  }

  std::vector<std::string> path_to(size_t v) const {
    std::vector<std::string> ev;
    std::optional<size_t> cur = v;
    while (cur) {
      ev.push_back(parent_[*cur].second);
      cur = parent_[*cur].first;
    }
    return {ev.rbegin(), ev.rend()};
  }

  std::optional<Trace> fair_lasso() const {
    size_t n = nodes_.size();
    std::vector<std::vector<size_t>> adj(n);
    for (size_t v = 0; v < n; ++v)
      for (const auto& a : arcs_[v]) adj[v].push_back(a.target);
    std::vector<size_t> comp = components(adj);
    size_t nc = 0;
    for (size_t c : comp) nc = std::max(nc, c + 1);
    std::vector<std::uint32_t> covered(nc, 0);
    std::vector<bool> cyclic(nc, false);
    for (size_t v = 0; v < n; ++v)
      for (const auto& a : arcs_[v])
        if (comp[a.target] == comp[v]) {
          cyclic[comp[v]] = true;
          covered[comp[v]] |= a.done;
        }
    std::optional<Trace> best;
    std::vector<bool> tried(nc, false);
    for (size_t v = 0; v < n; ++v) {  // BFS order: first node of a component is shallowest
      size_t c = comp[v];
      if (tried[c] || !cyclic[c] || covered[c] != full_) continue;
      tried[c] = true;
      std::vector<std::string> cycle;
      std::uint32_t got = 0;
      size_t cur = v;
      for (size_t b = 0; b < temporal_.size(); ++b) {
        if ((got >> b) & 1u) continue;
        auto leg = walk(comp, cur, [&](const Arc& a) { return (a.done >> b) & 1u; });
        for (const auto& [arc, to] : leg) {
          cycle.push_back(arc->letter);
          got |= arc->done;
          cur = to;
        }
      }
      if (cur != v || cycle.empty()) {
        auto leg = walk(comp, cur, [&](const Arc& a) { return a.target == v; });
        for (const auto& [arc, to] : leg) cycle.push_back(arc->letter);
      }
      Trace t = Trace::lasso(path_to_prefix(v), cycle);
      if (!best || t.prefix.size() + t.cycle.size() < best->prefix.size() + best->cycle.size())
        best = t;
    }
    return best;
  }

  std::vector<std::string> path_to_prefix(size_t v) const { return path_to(v); }

  /// Shortest arc sequence inside v's component ending with an arc that
  /// satisfies `goal`.
  template <class Goal>
  std::vector<std::pair<const Arc*, size_t>> walk(const std::vector<size_t>& comp, size_t from,
                                                 Goal goal) const {
    std::map<size_t, std::pair<size_t, const Arc*>> prev;
    std::vector<size_t> queue{from};
    std::set<size_t> seen{from};
    for (size_t h = 0; h < queue.size(); ++h) {
      size_t u = queue[h];
      for (const auto& a : arcs_[u]) {
        if (comp[a.target] != comp[from]) continue;
        if (goal(a)) {
          std::vector<std::pair<const Arc*, size_t>> legs{{&a, a.target}};
          for (size_t x = u; x != from; x = prev.at(x).first) legs.push_back({prev.at(x).second, x});
          return {legs.rbegin(), legs.rend()};
        }
        if (seen.insert(a.target).second) {
          prev[a.target] = {u, &a};
          queue.push_back(a.target);
        }
      }
    }
    throw Error("internal error: oracle could not close a fair cycle");
  }

  static std::vector<size_t> components(const std::vector<std::vector<size_t>>& adj) {
    // Kosaraju: finish order on the graph, then sweep the reverse graph.
    size_t n = adj.size();
    std::vector<std::vector<size_t>> radj(n);
    for (size_t v = 0; v < n; ++v)
      for (size_t w : adj[v]) radj[w].push_back(v);
    std::vector<size_t> order;
    std::vector<bool> seen(n, false);
    for (size_t s = 0; s < n; ++s) {
      if (seen[s]) continue;
      std::vector<std::pair<size_t, size_t>> st{{s, 0}};
      seen[s] = true;
      while (!st.empty()) {
        auto& [v, i] = st.back();
        if (i < adj[v].size()) {
          size_t w = adj[v][i++];
          if (!seen[w]) {
            seen[w] = true;
            st.push_back({w, 0});
          }
        } else {
          order.push_back(v);
          st.pop_back();
        }
      }
    }
    const size_t none = static_cast<size_t>(-1);
    std::vector<size_t> comp(n, none);
    size_t c = 0;
    for (size_t k = order.size(); k-- > 0;) {
      size_t s = order[k];
      if (comp[s] != none) continue;
      std::vector<size_t> st{s};
      comp[s] = c;
      while (!st.empty()) {
        size_t v = st.back();
        st.pop_back();
        for (size_t w : radj[v])
          if (comp[w] == none) comp[w] = c, st.push_back(w);
      }
      ++c;
    }
    return comp;
  }

  const Quotient& q_;
  size_t max_nodes_;
  std::vector<Formula> forms_;
  std::vector<Sub> subs_;
  std::vector<size_t> temporal_;
  size_t root_ = 0;
  std::uint32_t full_ = 0, bottom_ = 0;
  std::map<std::pair<size_t, std::uint32_t>, size_t> ids_;
  std::vector<std::pair<size_t, std::uint32_t>> nodes_;
  std::vector<std::pair<std::optional<size_t>, std::string>> parent_;
  std::vector<std::vector<Arc>> arcs_;
};

}  // namespace detail

/// Reference model checker. Simple lassos of the quotient graph are
/// enumerated first; if none refutes φ, a closure-based product search
/// decides. Neither stage shares code with ltl::model_check.
/// A counterexample agrees with some machine trace on the atoms of φ; events
/// outside α(φ) are filled with one arbitrary non-atom event.
inline ltl::Verdict oracle_model_check(const sem::StateGraph& g, const Formula& phi,
                                       OracleBounds bounds = {}) {
  ltl::Verdict v;
  EventSet atoms = alphabet(phi);
  std::string silent = "~";
  while (atoms.count(silent)) silent += "~";
  auto q = detail::bisimulation_quotient(g, atoms, silent);

  bool complete = false;
  size_t words = 0;
  std::optional<Trace> bad = detail::enumerate_lassos(q, phi, bounds, complete, words);
  v.method = "lasso-enumeration";
  v.product_states = words;
  if (!bad) {
    detail::HintikkaSearch search(q, phi, bounds.max_nodes);
    bad = search.run();
    v.method = "lasso-enumeration+closure-product";
    v.product_states = search.nodes();
  }
  if (bad) {
    // The silent letter stands for events φ ignores; any of them will do.
    std::string stand_in;
    for (const auto& e : g.edges)
      if (!atoms.count(e.event)) {
        stand_in = e.event;
        break;
      }
    for (auto* w : {&bad->prefix, &bad->cycle})
      for (auto& e : *w)
        if (e == silent) e = stand_in;
    v.holds = false;
    v.counterexample = bad;
  }
  return v;
}

}  // namespace ebltl::oracle
