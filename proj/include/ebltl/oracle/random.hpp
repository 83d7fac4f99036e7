#pragma once

// Seeded generators for randomized differential runs.

#include <algorithm>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "ebltl/formula.hpp"
#include "ebltl/ltl/trace.hpp"
#include "ebltl/refine/renaming.hpp"
#include "ebltl/sem/explore.hpp"

namespace ebltl::oracle {

/// Random formula over `atoms` with depth at most `depth`.
inline Formula random_formula(std::mt19937& rng, const std::vector<std::string>& atoms,
                              int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 8);
  int k = pick(rng);
  auto sub = [&] { return random_formula(rng, atoms, depth - 1); };
  switch (k) {
    case 0:
      if (rng() % 6 == 0) return Formula::truth();
      return Formula::atom(atoms[rng() % atoms.size()]);
    case 1:
      return Formula::atom(atoms[rng() % atoms.size()]);
    case 2:
      return Formula::negation(sub());
    case 3: {
      Formula a = sub();
      return Formula::disjunction(a, sub());
    }
    case 4: {
      Formula a = sub();
      return Formula::conjunction(a, sub());
    }
    case 5: {
      Formula a = sub();
      return Formula::until(a, sub());
    }
    case 6:
      return Formula::finally(sub());
    case 7:
      return Formula::globally(sub());
    default: {
      Formula a = sub();
      return Formula::implies(a, sub());
    }
  }
}

/// Random finite trace or lasso; lengths up to `max_len`.
inline ltl::Trace random_trace(std::mt19937& rng, const std::vector<std::string>& letters,
                               size_t max_len) {
  auto word = [&](size_t n) {
    std::vector<std::string> w;
    for (size_t i = 0; i < n; ++i) w.push_back(letters[rng() % letters.size()]);
    return w;
  };
  std::uniform_int_distribution<size_t> len(0, max_len);
  if (rng() % 3 == 0) return ltl::Trace::finite(word(len(rng)));
  size_t c = 1 + rng() % max_len;
  auto prefix = word(len(rng));
  return ltl::Trace::lasso(prefix, word(c));
}

/// Random graph with 1..max_states states reachable from state 0. Each state
/// gets 0..2 outgoing edges; a few deadlocks are allowed.
inline sem::StateGraph random_graph(std::mt19937& rng, const std::vector<std::string>& letters,
                                    size_t max_states) {
  sem::StateGraph g;
  size_t n = 1 + rng() % max_states;
  for (size_t i = 0; i < n; ++i) g.add_state({static_cast<sem::Value>(i)});
  g.initial = {0};
  // A random spanning tree keeps every state reachable.
  for (size_t i = 1; i < n; ++i) {
    size_t src = rng() % i;
    g.add_edge(src, letters[rng() % letters.size()], i);
  }
  for (size_t s = 0; s < n; ++s) {
    size_t extra = rng() % 5 == 0 ? 0 : 1 + rng() % 2;
    if (rng() % 3 == 0) extra = std::min<size_t>(extra, 1);
    for (size_t k = 0; k < extra; ++k) {
      size_t t = rng() % 4 == 0 ? s : rng() % n;
      const std::string& a = letters[rng() % letters.size()];
      g.add_edge(s, a, t);
    }
  }
  // Drop duplicate (source, letter, target) triples.
  std::sort(g.edges.begin(), g.edges.end(), [](const sem::Edge& a, const sem::Edge& b) {
    return std::tie(a.source, a.event, a.target) < std::tie(b.source, b.event, b.target);
  });
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end(),
                            [](const sem::Edge& a, const sem::Edge& b) {
                              return a.source == b.source && a.event == b.event &&
                                     a.target == b.target;
                            }),
                g.edges.end());
  g.finish();
  return g;
}

/// Partial surjective renaming from `concrete` onto `abstract`
/// (needs |concrete| >= |abstract|). Each leftover concrete event maps to a
/// random abstract event or, one time in three, stays new.
inline refine::RenamingMap random_renaming(std::mt19937& rng,
                                           const std::vector<std::string>& concrete,
                                           const std::vector<std::string>& abstract) {
  refine::RenamingMap h;
  h.concrete_alphabet = {concrete.begin(), concrete.end()};
  h.abstract_alphabet = {abstract.begin(), abstract.end()};
  std::vector<std::string> c = concrete;
  std::shuffle(c.begin(), c.end(), rng);
  for (size_t i = 0; i < c.size(); ++i) {
    if (i < abstract.size())
      h.forward[c[i]] = abstract[i];
    else if (rng() % 3 != 0)
      h.forward[c[i]] = abstract[rng() % abstract.size()];
  }
  return h;
}

/// Disjunction of one or two atoms, or false.
inline Formula random_letter_predicate(std::mt19937& rng, const std::vector<std::string>& atoms) {
  if (rng() % 6 == 0) return Formula::falsity();
  Formula d = Formula::atom(atoms[rng() % atoms.size()]);
  if (rng() % 2) d = Formula::disjunction(d, Formula::atom(atoms[rng() % atoms.size()]));
  return d;
}

/// Boolean combinations of GF D, FG !D, G(!D | F D') and F D over letter
/// predicates D, D'.
inline Formula random_schema_formula(std::mt19937& rng, const std::vector<std::string>& atoms,
                                     int depth) {
  if (depth > 0 && rng() % 2) {
    Formula a = random_schema_formula(rng, atoms, depth - 1);
    switch (rng() % 3) {
      case 0:
        return Formula::negation(a);
      case 1:
        return Formula::conjunction(a, random_schema_formula(rng, atoms, depth - 1));
      default:
        return Formula::disjunction(a, random_schema_formula(rng, atoms, depth - 1));
    }
  }
  Formula d = random_letter_predicate(rng, atoms);
  switch (rng() % 4) {
    case 0:
      return Formula::globally(Formula::finally(d));
    case 1:
      return Formula::finally(Formula::globally(Formula::negation(d)));
    case 2:
      return Formula::globally(
          Formula::disjunction(Formula::negation(d), Formula::finally(random_letter_predicate(rng, atoms))));
    default:
      return Formula::finally(d);
  }
}

}  // namespace ebltl::oracle
