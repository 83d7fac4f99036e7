#pragma once

#include <string>
#include <vector>

#include "ebltl/formula.hpp"
#include "ebltl/ltl/trace.hpp"

namespace ebltl::ltl {

namespace detail {

/// The distinct suffixes of a trace as positions 0..size-1 with a successor
/// function. A finite trace gets one extra position for the empty suffix,
/// which has no letter and is its own successor.
struct Positions {
  std::vector<const std::string*> letter;  // null: empty suffix
  std::vector<size_t> next;

  explicit Positions(const Trace& u) {
    size_t p = u.prefix.size();
    if (u.is_lasso()) {
      size_t n = p + u.cycle.size();
      for (size_t i = 0; i < n; ++i) {
        letter.push_back(i < p ? &u.prefix[i] : &u.cycle[i - p]);
        next.push_back(i + 1 < n ? i + 1 : p);
      }
    } else {
      for (size_t i = 0; i < p; ++i) {
        letter.push_back(&u.prefix[i]);
        next.push_back(i + 1);
      }
      letter.push_back(nullptr);
      next.push_back(p);
    }
  }
  size_t size() const { return letter.size(); }
};

using Column = std::vector<bool>;

/// Least (until) or greatest (globally) solution of
/// x[i] = base[i] || (step[i] && x[next(i)]).
inline Column fixpoint(const Positions& pos, const Column& base, const Column& step, bool greatest) {
  size_t n = pos.size();
  Column x(n, greatest);
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t k = n; k-- > 0;) {
      bool v = base[k] || (step[k] && x[pos.next[k]]);
      if (v != x[k]) {
        x[k] = v;
        changed = true;
      }
    }
  }
  return x;
}

inline Column evaluate(const Positions& pos, const Formula& f) {
  using K = Formula::Kind;
  size_t n = pos.size();
  switch (f.kind()) {
    case K::True:
      return Column(n, true);
    case K::Atom: {
      Column c(n);
      for (size_t i = 0; i < n; ++i) c[i] = pos.letter[i] && *pos.letter[i] == f.event();
      return c;
    }
    case K::Not: {
      Column c = evaluate(pos, f.operand());
      c.flip();
      return c;
    }
    case K::Or:
    case K::And: {
      Column a = evaluate(pos, f.lhs()), b = evaluate(pos, f.rhs());
      for (size_t i = 0; i < n; ++i) a[i] = f.kind() == K::Or ? (a[i] || b[i]) : (a[i] && b[i]);
      return a;
    }
    case K::Until:
      return fixpoint(pos, evaluate(pos, f.rhs()), evaluate(pos, f.lhs()), false);
    case K::Finally:
      return fixpoint(pos, evaluate(pos, f.operand()), Column(n, true), false);
    case K::Globally:
      // G p: x = p && x[next], i.e. greatest fixpoint with an empty base.
      return fixpoint(pos, Column(n, false), evaluate(pos, f.operand()), true);
  }
  return Column(n, false);
}

}  // namespace detail

/// u ⊨ φ. Lassos are evaluated over their prefix+cycle distinct suffixes.
/// A finite trace u has suffixes u^0..u^#u, the last one empty; atoms are
/// false on the empty suffix and U/F/G range over all of them.
inline bool holds_on_trace(const Trace& u, const Formula& phi) {
  detail::Positions pos(u);
  return detail::evaluate(pos, phi)[0];
}

/// Truth value of φ at every distinct suffix position of u.
inline std::vector<bool> evaluate_positions(const Trace& u, const Formula& phi) {
  detail::Positions pos(u);
  return detail::evaluate(pos, phi);
}

}  // namespace ebltl::ltl
