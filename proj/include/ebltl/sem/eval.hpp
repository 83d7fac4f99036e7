#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ebltl/dsl/ast.hpp"
#include "ebltl/error.hpp"

namespace ebltl::sem {

using Value = std::int64_t;

/// Variable valuation in declaration order. Booleans are 0/1, sets are
/// element bitmasks over their carrier, enum values are element indices.
using State = std::vector<Value>;

/// Evaluation context. `abs` is only consulted by linking predicates.
struct Env {
  const State* vars = nullptr;
  const State* abs = nullptr;
  const std::vector<Value>* frame = nullptr;
};

inline Value eval(const dsl::Expr& e, const Env& env) {
  using dsl::Op;
  auto arg = [&](size_t i) { return eval(*e.args[i], env); };
  switch (e.op) {
    case Op::IntLit:
    case Op::BoolLit:
    case Op::ElemLit:
      return e.value;
    case Op::SetLit: {
      if (e.args.empty()) return e.value;
      Value m = 0;
      for (size_t i = 0; i < e.args.size(); ++i) m |= Value{1} << arg(i);
      return m;
    }
    case Op::Var:
      return (*env.vars)[e.index];
    case Op::AbsVar:
      if (!env.abs) throw EvalError("abstract variable '" + e.name + "' has no value here");
      return (*env.abs)[e.index];
    case Op::Param:
      return (*env.frame)[e.index];
    case Op::Neg:
      return -arg(0);
    case Op::Add:
      return arg(0) + arg(1);
    case Op::Sub:
      return arg(0) - arg(1);
    case Op::Mul:
      return arg(0) * arg(1);
    case Op::Div:
    case Op::Mod: {
      Value a = arg(0), b = arg(1);
      if (b == 0) throw EvalError("division by zero at " + std::to_string(e.line) + ":" +
                                  std::to_string(e.column));
      return e.op == Op::Div ? a / b : a % b;
    }
    case Op::Min:
      return std::min(arg(0), arg(1));
    case Op::Max:
      return std::max(arg(0), arg(1));
    case Op::Ite:
      return arg(0) ? arg(1) : arg(2);
    case Op::Card:
      return std::popcount(static_cast<std::uint64_t>(arg(0)));
    case Op::Union:
      return arg(0) | arg(1);
    case Op::Inter:
      return arg(0) & arg(1);
    case Op::Diff:
      return arg(0) & ~arg(1);
    case Op::Eq:
      return arg(0) == arg(1);
    case Op::Ne:
      return arg(0) != arg(1);
    case Op::Lt:
      return arg(0) < arg(1);
    case Op::Le:
      return arg(0) <= arg(1);
    case Op::Gt:
      return arg(0) > arg(1);
    case Op::Ge:
      return arg(0) >= arg(1);
    case Op::In:
      return (arg(1) >> arg(0)) & 1;
    case Op::NotIn:
      return !((arg(1) >> arg(0)) & 1);
    case Op::Subset:
      return (arg(0) & ~arg(1)) == 0;
    case Op::NotSubset:
      return (arg(0) & ~arg(1)) != 0;
    case Op::And:
      return arg(0) && arg(1);
    case Op::Or:
      return arg(0) || arg(1);
    case Op::Implies:
      return !arg(0) || arg(1);
    case Op::Iff:
      return (arg(0) != 0) == (arg(1) != 0);
    case Op::Not:
      return !arg(0);
    default:
      throw EvalError("unresolved expression '" + e.name + "'");
  }
}

/// Null predicates are `true`.
inline bool holds(const dsl::ExprPtr& p, const Env& env) { return !p || eval(*p, env) != 0; }

/// All values of a finite type, ascending.
inline std::vector<Value> domain_values(const dsl::Type& t, const dsl::MachineAST& m) {
  std::vector<Value> out;
  switch (t.kind) {
    case dsl::Type::Kind::Int:
      for (Value v = t.lo; v <= t.hi; ++v) out.push_back(v);
      break;
    case dsl::Type::Kind::Bool:
      out = {0, 1};
      break;
    case dsl::Type::Kind::Set: {
      size_t n = m.carriers[t.carrier].elements.size();
      if (n > 20) throw LimitError("set domain over '" + m.carriers[t.carrier].name +
                                   "' is too large to enumerate");
      for (Value v = 0; v < (Value{1} << n); ++v) out.push_back(v);
      break;
    }
    case dsl::Type::Kind::Enum:
      for (Value v = 0; v < static_cast<Value>(m.carriers[t.carrier].elements.size()); ++v)
        out.push_back(v);
      break;
  }
  return out;
}

inline bool in_domain(const dsl::Type& t, Value v, const dsl::MachineAST& m) {
  switch (t.kind) {
    case dsl::Type::Kind::Int:
      return v >= t.lo && v <= t.hi;
    case dsl::Type::Kind::Bool:
      return v == 0 || v == 1;
    case dsl::Type::Kind::Set: {
      size_t n = m.carriers[t.carrier].elements.size();
      return v >= 0 && (n >= 63 || v < (Value{1} << n));
    }
    case dsl::Type::Kind::Enum:
      return v >= 0 && v < static_cast<Value>(m.carriers[t.carrier].elements.size());
  }
  return false;
}

/// Canonical text of a value; set elements are listed in sorted order.
inline std::string format_value(const dsl::Type& t, Value v, const dsl::MachineAST& m) {
  switch (t.kind) {
    case dsl::Type::Kind::Int:
      return std::to_string(v);
    case dsl::Type::Kind::Bool:
      return v ? "TRUE" : "FALSE";
    case dsl::Type::Kind::Set: {
      const auto& els = m.carriers[t.carrier].elements;
      std::vector<std::string> names;
      for (size_t k = 0; k < els.size(); ++k)
        if ((v >> k) & 1) names.push_back(els[k]);
      std::sort(names.begin(), names.end());
      std::string s = "{";
      for (size_t i = 0; i < names.size(); ++i) s += (i ? ", " : "") + names[i];
      return s + "}";
    }
    case dsl::Type::Kind::Enum: {
      const auto& els = m.carriers[t.carrier].elements;
      return v >= 0 && v < static_cast<Value>(els.size()) ? els[v] : "?" + std::to_string(v);
    }
  }
  return "?";
}

/// `name=value` pairs, variables sorted by name.
inline std::string format_state(const State& s, const dsl::MachineAST& m) {
  std::vector<size_t> order(m.variables.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return m.variables[a].name < m.variables[b].name; });
  std::string out;
  for (size_t k = 0; k < order.size(); ++k) {
    size_t i = order[k];
    out += (k ? ", " : "") + m.variables[i].name + "=" +
           format_value(m.variables[i].type, s[i], m);
  }
  return out;
}

/// Calls `f` for every assignment of `params` into frame slots
/// `base..base+params.size()`, in lexicographic order.
inline void for_each_binding(const std::vector<dsl::Decl>& params, const dsl::MachineAST& m,
                             std::vector<Value>& frame, int base,
                             const std::function<void()>& f) {
  std::vector<std::vector<Value>> doms;
  for (const auto& p : params) doms.push_back(domain_values(p.type, m));
  std::function<void(size_t)> rec = [&](size_t i) {
    if (i == params.size()) {
      f();
      return;
    }
    for (Value v : doms[i]) {
      frame[base + i] = v;
      rec(i + 1);
    }
  };
  rec(0);
}

namespace detail {

inline void run_actions(const std::vector<dsl::Action>& acts, size_t i, State& next,
                        std::vector<Value>& frame, const State& pre, const dsl::MachineAST& m,
                        const std::function<void()>& done) {
  if (i == acts.size()) {
    done();
    return;
  }
  const dsl::Action& a = acts[i];
  Env env{&pre, nullptr, &frame};
  if (a.kind == dsl::Action::Kind::Assign) {
    next[a.target_index] = eval(*a.value, env);
    run_actions(acts, i + 1, next, frame, pre, m, done);
    return;
  }
  for_each_binding(a.choice_params, m, frame, a.param_base, [&] {
    if (!holds(a.where, env)) return;
    run_actions(a.body, 0, next, frame, pre, m,
                [&] { run_actions(acts, i + 1, next, frame, pre, m, done); });
  });
}

}  // namespace detail

/// One way an event can fire: the full parameter frame (event parameters
/// followed by nested choice parameters) and the resulting state.
struct Firing {
  std::vector<Value> frame;
  State target;
};

/// Outcomes of executing `e`'s actions at `s` with the event parameters
/// already fixed in `frame`. The guard is not consulted.
inline std::vector<Firing> apply_actions(const dsl::MachineAST& m, const dsl::EventAST& e,
                                         const State& s, std::vector<Value> frame) {
  std::vector<Firing> out;
  frame.resize(std::max<size_t>(frame.size(), e.frame_size));
  State next = s;
  if (next.size() != m.variables.size()) next.assign(m.variables.size(), 0);
  detail::run_actions(e.actions, 0, next, frame, s, m,
                      [&] { out.push_back({frame, next}); });
  return out;
}

/// Event parameter bindings (frame prefixes) for which the guard holds at s.
inline std::vector<std::vector<Value>> enabled_bindings(const dsl::MachineAST& m,
                                                        const dsl::EventAST& e, const State& s) {
  std::vector<std::vector<Value>> out;
  std::vector<Value> frame(e.frame_size, 0);
  Env env{&s, nullptr, &frame};
  for_each_binding(e.params, m, frame, 0, [&] {
    if (holds(e.guard, env)) out.emplace_back(frame.begin(), frame.begin() + e.params.size());
  });
  return out;
}

/// Every parameter binding, guard ignored.
inline std::vector<std::vector<Value>> all_bindings(const dsl::MachineAST& m,
                                                    const dsl::EventAST& e) {
  std::vector<std::vector<Value>> out;
  std::vector<Value> frame(e.params.size(), 0);
  for_each_binding(e.params, m, frame, 0, [&] { out.push_back(frame); });
  return out;
}

inline bool enabled(const dsl::MachineAST& m, const dsl::EventAST& e, const State& s) {
  return !enabled_bindings(m, e, s).empty();
}

/// All firings of `e` at `s` (guard respected).
inline std::vector<Firing> successors(const dsl::MachineAST& m, const dsl::EventAST& e,
                                      const State& s) {
  std::vector<Firing> out;
  for (auto& b : enabled_bindings(m, e, s)) {
    auto f = apply_actions(m, e, s, b);
    out.insert(out.end(), f.begin(), f.end());
  }
  return out;
}

/// Names of the frame slots of an event, in slot order.
inline std::vector<std::string> frame_names(const dsl::EventAST& e) {
  std::vector<std::string> names(e.frame_size);
  for (size_t i = 0; i < e.params.size(); ++i) names[i] = e.params[i].name;
  std::function<void(const std::vector<dsl::Action>&)> walk = [&](const auto& acts) {
    for (const auto& a : acts) {
      if (a.kind != dsl::Action::Kind::Choice) continue;
      for (size_t i = 0; i < a.choice_params.size(); ++i)
        names[a.param_base + i] = a.choice_params[i].name;
      walk(a.body);
    }
  };
  walk(e.actions);
  return names;
}

/// Domain membership of every variable plus the invariant.
inline bool state_ok(const dsl::MachineAST& m, const State& s) {
  if (s.size() != m.variables.size()) return false;
  for (size_t i = 0; i < s.size(); ++i)
    if (!in_domain(m.variables[i].type, s[i], m)) return false;
  Env env{&s, nullptr, nullptr};
  return holds(m.invariant, env);
}

}  // namespace ebltl::sem
