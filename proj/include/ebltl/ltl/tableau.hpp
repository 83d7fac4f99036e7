#pragma once

#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "ebltl/formula.hpp"

namespace ebltl::ltl {

/// Negation normal form over true/false/[x]/![x]/and/or/U/R, hash-consed so
/// that subformulas are small integers.
class NnfTable {
 public:
  enum class Kind { True, False, Atom, NegAtom, And, Or, Until, Release };
  struct Node {
    Kind kind;
    int atom = -1;  // index into atoms()
    int lhs = -1;
    int rhs = -1;
  };

  /// NNF of φ (negate = false) or of ¬φ (negate = true).
  int add(const Formula& f, bool negate) {
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::True:
        return make(negate ? Kind::False : Kind::True);
      case K::Atom:
        return make(negate ? Kind::NegAtom : Kind::Atom, atom_id(f.event()));
      case K::Not:
        return add(f.operand(), !negate);
      case K::Or:
        return make(negate ? Kind::And : Kind::Or, -1, add(f.lhs(), negate), add(f.rhs(), negate));
      case K::And:
        return make(negate ? Kind::Or : Kind::And, -1, add(f.lhs(), negate), add(f.rhs(), negate));
      case K::Until:
        return make(negate ? Kind::Release : Kind::Until, -1, add(f.lhs(), negate),
                    add(f.rhs(), negate));
      case K::Finally:
        if (negate) return make(Kind::Release, -1, make(Kind::False), add(f.operand(), true));
        return make(Kind::Until, -1, make(Kind::True), add(f.operand(), false));
      case K::Globally:
        if (negate) return make(Kind::Until, -1, make(Kind::True), add(f.operand(), true));
        return make(Kind::Release, -1, make(Kind::False), add(f.operand(), false));
    }
    return make(Kind::False);
  }

  const Node& operator[](int i) const { return nodes_[i]; }
  size_t size() const { return nodes_.size(); }
  const std::vector<std::string>& atoms() const { return atoms_; }

  int atom_id(const std::string& e) {
    for (size_t i = 0; i < atoms_.size(); ++i)
      if (atoms_[i] == e) return static_cast<int>(i);
    atoms_.push_back(e);
    return static_cast<int>(atoms_.size() - 1);
  }

 private:
  int make(Kind k, int atom = -1, int l = -1, int r = -1) {
    auto key = std::make_tuple(static_cast<int>(k), atom, l, r);
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    nodes_.push_back({k, atom, l, r});
    int id = static_cast<int>(nodes_.size() - 1);
    index_.emplace(key, id);
    return id;
  }

  std::vector<Node> nodes_;
  std::vector<std::string> atoms_;
  std::map<std::tuple<int, int, int, int>, int> index_;
};

/// Generalized Büchi automaton obtained by tableau expansion of an NNF
/// formula. State 0 is the initial pseudo-state; it carries no label.
/// A run reads letter a_k when entering its (k+1)-th state.
struct Tableau {
  struct State {
    std::set<int> old;
    std::set<int> next;
    std::vector<int> pos;  // positive atoms in old
    std::vector<int> neg;  // negated atoms in old
    std::vector<bool> accepting;  // one flag per acceptance set
  };
  std::vector<State> states;
  std::vector<std::vector<int>> succ;
  std::vector<int> untils;  // NNF ids of U-subformulas, one acceptance set each

  /// Letter = atom index; -1 stands for an event outside the formula's
  /// atoms, and `end_of_trace` for the padding letter after a deadlock.
  bool accepts(int q, int letter, bool end_of_trace = false) const {
    const State& s = states[q];
    if (end_of_trace) return s.pos.empty();
    for (int p : s.pos)
      if (p != letter) return false;
    for (int n : s.neg)
      if (n == letter) return false;
    return true;
  }

  bool fair_member(int q, size_t set) const { return states[q].accepting[set]; }
};

inline Tableau build_tableau(const NnfTable& t, int root) {
  using K = NnfTable::Kind;
  struct Proto {
    std::set<int> incoming, fresh, old, next;
  };
  Tableau a;
  a.states.push_back({});  // initial pseudo-state
  std::vector<std::set<int>> incoming(1);
  std::map<std::pair<std::set<int>, std::set<int>>, int> index;

  std::vector<Proto> work;
  work.push_back({{0}, {root}, {}, {}});
  auto contradicts = [&](const std::set<int>& old, int eta) {
    const auto& n = t[eta];
    for (int o : old) {
      const auto& m = t[o];
      if (n.kind == K::Atom && m.kind == K::Atom && m.atom != n.atom) return true;
      if (n.kind == K::Atom && m.kind == K::NegAtom && m.atom == n.atom) return true;
      if (n.kind == K::NegAtom && m.kind == K::Atom && m.atom == n.atom) return true;
    }
    return false;
  };

  while (!work.empty()) {
    Proto p = std::move(work.back());
    work.pop_back();
    if (p.fresh.empty()) {
      auto key = std::make_pair(p.old, p.next);
      auto it = index.find(key);
      if (it != index.end()) {
        incoming[it->second].insert(p.incoming.begin(), p.incoming.end());
        continue;
      }
      int id = static_cast<int>(a.states.size());
      Tableau::State s;
      s.old = p.old;
      s.next = p.next;
      a.states.push_back(std::move(s));
      incoming.push_back(p.incoming);
      index.emplace(std::move(key), id);
      work.push_back({{id}, p.next, {}, {}});
      continue;
    }
    int eta = *p.fresh.begin();
    p.fresh.erase(p.fresh.begin());
    if (p.old.count(eta)) {
      work.push_back(std::move(p));
      continue;
    }
    const auto& n = t[eta];
    switch (n.kind) {
      case K::False:
        break;
      case K::True:
        p.old.insert(eta);
        work.push_back(std::move(p));
        break;
      case K::Atom:
      case K::NegAtom:
        if (contradicts(p.old, eta)) break;
        p.old.insert(eta);
        work.push_back(std::move(p));
        break;
      case K::And:
        p.old.insert(eta);
        p.fresh.insert(n.lhs);
        p.fresh.insert(n.rhs);
        work.push_back(std::move(p));
        break;
      case K::Or: {
        p.old.insert(eta);
        Proto q = p;
        p.fresh.insert(n.lhs);
        q.fresh.insert(n.rhs);
        work.push_back(std::move(q));
        work.push_back(std::move(p));
        break;
      }
      case K::Until: {
        p.old.insert(eta);
        Proto q = p;
        p.fresh.insert(n.lhs);
        p.next.insert(eta);
        q.fresh.insert(n.rhs);
        work.push_back(std::move(q));
        work.push_back(std::move(p));
        break;
      }
      case K::Release: {
        p.old.insert(eta);
        Proto q = p;
        p.fresh.insert(n.rhs);
        p.next.insert(eta);
        q.fresh.insert(n.lhs);
        q.fresh.insert(n.rhs);
        work.push_back(std::move(q));
        work.push_back(std::move(p));
        break;
      }
    }
  }

  for (size_t i = 0; i < t.size(); ++i)
    if (t[static_cast<int>(i)].kind == K::Until) a.untils.push_back(static_cast<int>(i));

  a.succ.assign(a.states.size(), {});
  for (size_t q = 1; q < a.states.size(); ++q) {
    auto& s = a.states[q];
    for (int o : s.old) {
      if (t[o].kind == K::Atom) s.pos.push_back(t[o].atom);
      if (t[o].kind == K::NegAtom) s.neg.push_back(t[o].atom);
    }
    for (int u : a.untils) s.accepting.push_back(!s.old.count(u) || s.old.count(t[u].rhs));
    for (int from : incoming[q]) a.succ[from].push_back(static_cast<int>(q));
  }
  a.states[0].accepting.assign(a.untils.size(), false);
  return a;
}

/// Tableau states from which some run on the all-padding word is accepting.
/// Being "at" q means q has consumed the last real letter, so the padding
/// letters are read by q's successors.
inline std::vector<bool> padding_accepting(const Tableau& a) {
  size_t n = a.states.size();
  std::vector<bool> ok(n, false);
  for (size_t q = 1; q < n; ++q) ok[q] = a.accepts(static_cast<int>(q), -1, true);

  // Fair SCCs of the padding-accepting subgraph via repeated reachability:
  // q is good if it lies on a cycle (within ok-states) that visits every
  // acceptance set, or reaches such a cycle.
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (size_t q = 0; q < n; ++q)
    for (int r : a.succ[q])
      if (ok[r]) reach[q][r] = true;
  for (size_t k = 0; k < n; ++k)
    if (ok[k])
      for (size_t i = 0; i < n; ++i)
        if (reach[i][k])
          for (size_t j = 0; j < n; ++j)
            if (reach[k][j]) reach[i][j] = true;

  std::vector<bool> fair(n, false);
  for (size_t q = 1; q < n; ++q) {
    if (!ok[q] || !reach[q][q]) continue;
    bool all = true;
    for (size_t set = 0; set < a.untils.size() && all; ++set) {
      bool hit = false;
      for (size_t r = 1; r < n && !hit; ++r)
        hit = ok[r] && reach[q][r] && reach[r][q] && a.states[r].accepting[set];
      all = hit;
    }
    fair[q] = all;
  }
  std::vector<bool> good(n, false);
  for (size_t q = 0; q < n; ++q)
    for (size_t r = 1; r < n && !good[q]; ++r)
      good[q] = fair[r] && (reach[q][r]);
  return good;
}

}  // namespace ebltl::ltl
