#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ebltl/dsl/ast.hpp"
#include "ebltl/error.hpp"

namespace ebltl::dsl {

namespace detail {

struct ParamSlot {
  std::string name;
  int index;
  Type type;
};

/// Resolves names in expressions, assigns types, and enforces the static
/// rules of the machine language.
class Typechecker {
 public:
  Typechecker(MachineAST& m, const MachineAST* abstract) : m_(m), abstract_(abstract) {}

  void check_declarations(const std::vector<Decl>& raw_constants,
                          const std::map<std::string, std::int64_t>& overrides) {
    std::set<std::string> names;
    auto declare = [&](const std::string& n, int line, int col, const char* what) {
      if (!names.insert(n).second)
        throw TypeError(std::string("duplicate ") + what + " '" + n + "'", line, col);
    };
    for (const auto& c : m_.carriers) {
      declare(c.name, 0, 0, "name");
      if (c.elements.size() > 62)
        throw TypeError("carrier '" + c.name + "' has more than 62 elements", 0, 0);
      for (const auto& e : c.elements) declare(e, 0, 0, "carrier element");
    }
    for (const auto& d : raw_constants) {
      declare(d.name, d.lo_expr->line, d.lo_expr->column, "constant");
      ExprPtr e = resolve(d.lo_expr, {}, Ctx::Constant);
      if (e->type.kind != Type::Kind::Int)
        throw TypeError("constant '" + d.name + "' must be an integer", e->line, e->column);
      std::int64_t v = fold_constant(e);
      auto it = overrides.find(d.name);
      if (it != overrides.end()) v = it->second;
      m_.constants.push_back({d.name, v});
    }
    for (const auto& [name, _] : overrides) {
      bool found = false;
      for (const auto& c : m_.constants) found = found || c.name == name;
      if (!found) throw TypeError("override for undeclared constant '" + name + "'", 0, 0);
    }
    for (auto& v : m_.variables) {
      declare(v.name, 0, 0, "variable");
      resolve_decl(v);
    }
  }

  void check_body() {
    if (m_.invariant) m_.invariant = expect_bool(resolve(m_.invariant, {}, Ctx::State));
    if (m_.variant) {
      m_.variant = resolve(m_.variant, {}, Ctx::State);
      if (m_.variant->type.kind != Type::Kind::Int)
        throw TypeError("variant must be an integer expression", m_.variant->line,
                        m_.variant->column);
    }
    bool needs_variant = m_.has_status(Status::Anticipated) || m_.has_status(Status::Convergent);
    if (needs_variant && !m_.variant)
      throw TypeError("machine '" + m_.name +
                          "' has anticipated or convergent events but no variant",
                      0, 0);
    if (!needs_variant && m_.variant)
      throw TypeError("machine '" + m_.name +
                          "' declares a variant but has no anticipated or convergent events",
                      m_.variant->line, m_.variant->column);

    check_event(m_.init, true);
    std::set<std::string> seen;
    for (auto& e : m_.events) {
      if (!seen.insert(e.name).second)
        throw TypeError("duplicate event name '" + e.name + "'", e.line, 1);
      check_event(e, false);
    }
    if (abstract_ && m_.linking) bind_linking(*abstract_);
  }

  void bind_linking(const MachineAST& abstract) {
    abstract_ = &abstract;
    if (!m_.linking || m_.linking_resolved) return;
    m_.linking = expect_bool(resolve(m_.linking, {}, Ctx::Linking));
    m_.linking_resolved = true;
  }

  ExprPtr resolve_state_expr(const ExprPtr& e) { return resolve(e, {}, Ctx::State); }
  ExprPtr resolve_linking_expr(const ExprPtr& e) {
    return expect_bool(resolve(e, {}, Ctx::Linking));
  }

 private:
  enum class Ctx { Constant, Init, State, Linking };

  void resolve_decl(Decl& d) {
    if (d.type.kind == Type::Kind::Bool) return;
    if (d.type.kind == Type::Kind::Set || d.type.kind == Type::Kind::Enum) {
      int c = carrier_index(d.lo_expr->name);
      if (c < 0)
        throw TypeError("unknown carrier set '" + d.lo_expr->name + "'", d.lo_expr->line,
                        d.lo_expr->column);
      d.type.carrier = c;
      if (d.type.kind == Type::Kind::Enum && m_.carriers[c].elements.empty())
        throw TypeError("enumerated type '" + d.lo_expr->name + "' is empty",
                        d.lo_expr->line, d.lo_expr->column);
      return;
    }
    ExprPtr lo = resolve(d.lo_expr, {}, Ctx::Constant);
    ExprPtr hi = resolve(d.hi_expr, {}, Ctx::Constant);
    d.type.lo = fold_constant(lo);
    d.type.hi = fold_constant(hi);
  }

  int carrier_index(const std::string& n) const {
    for (size_t i = 0; i < m_.carriers.size(); ++i)
      if (m_.carriers[i].name == n) return static_cast<int>(i);
    return -1;
  }

  std::int64_t fold_constant(const ExprPtr& e) const {
    switch (e->op) {
      case Op::IntLit:
        return e->value;
      case Op::Neg:
        return -fold_constant(e->args[0]);
      case Op::Add:
        return fold_constant(e->args[0]) + fold_constant(e->args[1]);
      case Op::Sub:
        return fold_constant(e->args[0]) - fold_constant(e->args[1]);
      case Op::Mul:
        return fold_constant(e->args[0]) * fold_constant(e->args[1]);
      case Op::Div: {
        auto d = fold_constant(e->args[1]);
        if (d == 0) throw TypeError("division by zero in constant", e->line, e->column);
        return fold_constant(e->args[0]) / d;
      }
      case Op::Min:
        return std::min(fold_constant(e->args[0]), fold_constant(e->args[1]));
      case Op::Max:
        return std::max(fold_constant(e->args[0]), fold_constant(e->args[1]));
      default:
        throw TypeError("expected a constant integer expression", e->line, e->column);
    }
  }

  static ExprPtr expect_bool(ExprPtr e) {
    if (e->type.kind != Type::Kind::Bool)
      throw TypeError("expected a predicate", e->line, e->column);
    return e;
  }

  [[noreturn]] static void mismatch(const ExprPtr& e, const std::string& what) {
    throw TypeError("type mismatch: " + what, e->line, e->column);
  }

  std::shared_ptr<Expr> node(const ExprPtr& src, Op op, Type t, std::vector<ExprPtr> args) {
    auto n = make_expr(op, std::move(args), src->line, src->column);
    n->type = t;
    n->value = src->value;
    n->name = src->name;
    n->index = src->index;
    return n;
  }

  ExprPtr resolve_name(const ExprPtr& e, const std::vector<ParamSlot>& scope, Ctx ctx) {
    const std::string& n = e->name;
    for (auto it = scope.rbegin(); it != scope.rend(); ++it) {
      if (it->name == n) {
        auto r = node(e, Op::Param, it->type, {});
        r->index = it->index;
        return r;
      }
    }
    int vi = m_.variable_index(n);
    if (vi >= 0) {
      if (ctx == Ctx::Constant)
        throw TypeError("variable '" + n + "' used where a constant is required", e->line,
                        e->column);
      if (ctx == Ctx::Init)
        throw TypeError("init may not read variable '" + n + "'", e->line, e->column);
      auto r = node(e, Op::Var, m_.variables[vi].type, {});
      r->index = vi;
      return r;
    }
    if (abstract_) {
      int ai = abstract_->variable_index(n);
      if (ai >= 0) {
        if (ctx != Ctx::Linking)
          throw TypeError("abstract variable '" + n +
                              "' may only appear in the linking clause",
                          e->line, e->column);
        Type t = abstract_->variables[ai].type;
        if (t.kind == Type::Kind::Set || t.kind == Type::Kind::Enum) {
          // Carriers are matched by name across machines.
          int c = carrier_index(abstract_->carriers[t.carrier].name);
          if (c < 0)
            throw TypeError("abstract variable '" + n + "' uses carrier '" +
                                abstract_->carriers[t.carrier].name +
                                "' which this machine does not declare",
                            e->line, e->column);
          t.carrier = c;
        }
        auto r = node(e, Op::AbsVar, t, {});
        r->index = ai;
        return r;
      }
    }
    for (const auto& c : m_.constants) {
      if (c.name == n) {
        auto r = node(e, Op::IntLit, Type::integer(), {});
        r->value = c.value;
        return r;
      }
    }
    for (size_t ci = 0; ci < m_.carriers.size(); ++ci) {
      const auto& c = m_.carriers[ci];
      if (c.name == n) {
        auto r = node(e, Op::SetLit, Type::set_of(static_cast<int>(ci)), {});
        r->value = c.elements.size() >= 63 ? -1 : ((std::int64_t{1} << c.elements.size()) - 1);
        return r;
      }
      for (size_t k = 0; k < c.elements.size(); ++k) {
        if (c.elements[k] == n) {
          auto r = node(e, Op::ElemLit, Type::enum_of(static_cast<int>(ci)), {});
          r->value = static_cast<std::int64_t>(k);
          return r;
        }
      }
    }
    throw TypeError("unknown identifier '" + n + "'", e->line, e->column);
  }

  ExprPtr resolve(const ExprPtr& e, const std::vector<ParamSlot>& scope, Ctx ctx) {
    using K = Type::Kind;
    if (e->op == Op::Name) return resolve_name(e, scope, ctx);
    if (e->op == Op::IntLit) return node(e, Op::IntLit, Type::integer(), {});
    if (e->op == Op::BoolLit) return node(e, Op::BoolLit, Type::boolean(), {});
    if (e->op == Op::Var || e->op == Op::AbsVar || e->op == Op::Param || e->op == Op::ElemLit)
      return e;  // already resolved
    if (e->op == Op::SetLit && e->type.kind == K::Set && e->args.empty()) return e;

    std::vector<ExprPtr> a;
    for (const auto& x : e->args) a.push_back(resolve(x, scope, ctx));

    auto want = [&](size_t i, K k, const char* what) {
      if (a[i]->type.kind != k) mismatch(a[i], what);
    };
    auto set_carrier = [&](const ExprPtr& l, const ExprPtr& r) {
      if (!l->type.compatible(r->type)) mismatch(r, "sets over different carriers");
      return l->type.carrier >= 0 ? l->type.carrier : r->type.carrier;
    };

    switch (e->op) {
      case Op::SetLit: {
        int carrier = -1;
        bool literal = true;
        std::int64_t mask = 0;
        for (const auto& x : a) {
          if (x->type.kind != K::Enum) mismatch(x, "set elements must be carrier elements");
          if (carrier >= 0 && carrier != x->type.carrier)
            mismatch(x, "set elements from different carriers");
          carrier = x->type.carrier;
          if (x->op == Op::ElemLit)
            mask |= std::int64_t{1} << x->value;
          else
            literal = false;
        }
        auto r = node(e, Op::SetLit, Type::set_of(carrier), literal ? std::vector<ExprPtr>{} : a);
        r->value = mask;
        return r;
      }
      case Op::Neg:
        want(0, K::Int, "negation needs an integer");
        return node(e, e->op, Type::integer(), a);
      case Op::Add:
      case Op::Mul:
      case Op::Div:
      case Op::Mod:
      case Op::Min:
      case Op::Max:
        want(0, K::Int, "arithmetic needs integers");
        want(1, K::Int, "arithmetic needs integers");
        return node(e, e->op, Type::integer(), a);
      case Op::Sub:
        if (a[0]->type.kind == K::Int) {
          want(1, K::Int, "integer subtraction needs integers");
          return node(e, Op::Sub, Type::integer(), a);
        }
        if (a[0]->type.kind == K::Set) {
          want(1, K::Set, "set difference needs sets");
          return node(e, Op::Diff, Type::set_of(set_carrier(a[0], a[1])), a);
        }
        mismatch(a[0], "'-' needs integers or sets");
      case Op::Union:
      case Op::Inter:
      case Op::Diff:
        want(0, K::Set, "set operation needs sets");
        want(1, K::Set, "set operation needs sets");
        return node(e, e->op, Type::set_of(set_carrier(a[0], a[1])), a);
      case Op::Card:
        want(0, K::Set, "card needs a set");
        return node(e, Op::Card, Type::integer(), a);
      case Op::Ite: {
        want(0, K::Bool, "ite condition must be a predicate");
        if (!a[1]->type.compatible(a[2]->type)) mismatch(a[2], "ite branches differ in type");
        Type t = a[1]->type;
        if (t.kind == K::Set && t.carrier < 0) t = a[2]->type;
        return node(e, Op::Ite, t, a);
      }
      case Op::Eq:
      case Op::Ne:
        if (!a[0]->type.compatible(a[1]->type)) mismatch(a[1], "operands differ in type");
        return node(e, e->op, Type::boolean(), a);
      case Op::Lt:
      case Op::Le:
      case Op::Gt:
      case Op::Ge:
        want(0, K::Int, "ordering needs integers");
        want(1, K::Int, "ordering needs integers");
        return node(e, e->op, Type::boolean(), a);
      case Op::In:
      case Op::NotIn:
        want(0, K::Enum, "membership needs a carrier element on the left");
        want(1, K::Set, "membership needs a set on the right");
        if (a[1]->type.carrier >= 0 && a[1]->type.carrier != a[0]->type.carrier)
          mismatch(a[1], "element and set from different carriers");
        return node(e, e->op, Type::boolean(), a);
      case Op::Subset:
      case Op::NotSubset:
        want(0, K::Set, "inclusion needs sets");
        want(1, K::Set, "inclusion needs sets");
        set_carrier(a[0], a[1]);
        return node(e, e->op, Type::boolean(), a);
      case Op::And:
      case Op::Or:
      case Op::Implies:
      case Op::Iff:
        want(0, K::Bool, "logical operator needs predicates");
        want(1, K::Bool, "logical operator needs predicates");
        return node(e, e->op, Type::boolean(), a);
      case Op::Not:
        want(0, K::Bool, "'not' needs a predicate");
        return node(e, Op::Not, Type::boolean(), a);
      default:
        throw TypeError("unsupported expression", e->line, e->column);
    }
  }

  void bind_params(std::vector<Decl>& params, std::vector<ParamSlot>& scope, int& next_slot) {
    std::set<std::string> local;
    for (auto& p : params) {
      if (!local.insert(p.name).second)
        throw TypeError("duplicate parameter '" + p.name + "'", 0, 0);
      if (m_.variable_index(p.name) >= 0)
        throw TypeError("parameter '" + p.name + "' shadows a variable", 0, 0);
      resolve_decl(p);
      if (p.type.kind == Type::Kind::Int && p.type.lo > p.type.hi)
        throw TypeError("parameter '" + p.name + "' has an empty domain", 0, 0);
      scope.push_back({p.name, next_slot++, p.type});
    }
  }

  void check_actions(std::vector<Action>& actions, std::vector<ParamSlot>& scope,
                     int& next_slot, std::set<std::string>& targets, Ctx ctx) {
    for (auto& a : actions) {
      if (a.kind == Action::Kind::Assign) {
        int vi = m_.variable_index(a.target);
        if (vi < 0) {
          if (abstract_ && abstract_->variable_index(a.target) >= 0)
            throw TypeError("cannot assign abstract variable '" + a.target + "'", a.line,
                            a.column);
          throw TypeError("assignment to undeclared variable '" + a.target + "'", a.line,
                          a.column);
        }
        if (!targets.insert(a.target).second)
          throw TypeError("variable '" + a.target + "' assigned twice in one event", a.line,
                          a.column);
        a.target_index = vi;
        a.value = resolve(a.value, scope, ctx);
        if (!a.value->type.compatible(m_.variables[vi].type))
          mismatch(a.value, "cannot assign to '" + a.target + "'");
      } else {
        size_t depth = scope.size();
        a.param_base = next_slot;
        bind_params(a.choice_params, scope, next_slot);
        if (a.where) a.where = expect_bool(resolve(a.where, scope, ctx));
        check_actions(a.body, scope, next_slot, targets, ctx);
        scope.resize(depth);
      }
    }
  }

  void check_event(EventAST& e, bool is_init) {
    std::vector<ParamSlot> scope;
    int next_slot = 0;
    Ctx ctx = is_init ? Ctx::Init : Ctx::State;
    if (is_init) {
      if (e.guard) throw TypeError("init may not have a guard", e.line, 1);
      if (e.status_given) throw TypeError("init may not have a status", e.line, 1);
      if (e.refines) throw TypeError("init may not refine an event", e.line, 1);
    } else if (!e.status_given && !e.refines) {
      throw TypeError("event '" + e.name + "' needs a status or a refines clause", e.line, 1);
    }
    bind_params(e.params, scope, next_slot);
    if (e.guard) e.guard = expect_bool(resolve(e.guard, scope, ctx));
    std::set<std::string> targets;
    check_actions(e.actions, scope, next_slot, targets, ctx);
    e.frame_size = next_slot;
    if (is_init) {
      for (const auto& v : m_.variables)
        if (!targets.count(v.name))
          throw TypeError("init does not assign variable '" + v.name + "'", e.line, 1);
    }
  }

  MachineAST& m_;
  const MachineAST* abstract_;
};

}  // namespace detail

}  // namespace ebltl::dsl
