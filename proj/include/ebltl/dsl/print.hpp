#pragma once

#include <sstream>
#include <string>

#include "ebltl/dsl/ast.hpp"

namespace ebltl::dsl {

namespace detail {

inline int precedence(Op op) {
  switch (op) {
    case Op::Iff:
      return 1;
    case Op::Implies:
      return 2;
    case Op::Or:
      return 3;
    case Op::And:
      return 4;
    case Op::Not:
      return 5;
    case Op::Eq:
    case Op::Ne:
    case Op::Lt:
    case Op::Le:
    case Op::Gt:
    case Op::Ge:
    case Op::In:
    case Op::NotIn:
    case Op::Subset:
    case Op::NotSubset:
      return 6;
    case Op::Add:
    case Op::Sub:
    case Op::Diff:
    case Op::Union:
    case Op::Inter:
      return 7;
    case Op::Mul:
    case Op::Div:
    case Op::Mod:
      return 8;
    case Op::Neg:
      return 9;
    default:
      return 10;
  }
}

inline const char* spelling(Op op) {
  switch (op) {
    case Op::Iff:
      return "<=>";
    case Op::Implies:
      return "=>";
    case Op::Or:
      return "or";
    case Op::And:
      return "&";
    case Op::Eq:
      return "=";
    case Op::Ne:
      return "/=";
    case Op::Lt:
      return "<";
    case Op::Le:
      return "<=";
    case Op::Gt:
      return ">";
    case Op::Ge:
      return ">=";
    case Op::In:
      return ":";
    case Op::NotIn:
      return "/:";
    case Op::Subset:
      return "<:";
    case Op::NotSubset:
      return "/<:";
    case Op::Add:
      return "+";
    case Op::Sub:
    case Op::Diff:
      return "-";
    case Op::Union:
      return "\\/";
    case Op::Inter:
      return "/\\";
    case Op::Mul:
      return "*";
    case Op::Div:
      return "/";
    case Op::Mod:
      return "mod";
    default:
      return "?";
  }
}

class ExprPrinter {
 public:
  explicit ExprPrinter(const MachineAST* m) : m_(m) {}

  std::string print(const ExprPtr& e) const {
    std::ostringstream os;
    emit(os, e, 0);
    return os.str();
  }

 private:
  void emit(std::ostream& os, const ExprPtr& e, int min_prec) const {
    int p = precedence(e->op);
    bool paren = p < min_prec;
    if (paren) os << '(';
    switch (e->op) {
      case Op::IntLit:
        if (!e->name.empty())
          os << e->name;
        else
          os << e->value;
        break;
      case Op::BoolLit:
        os << (e->value ? "TRUE" : "FALSE");
        break;
      case Op::ElemLit:
        if (!e->name.empty()) {
          os << e->name;
        } else if (m_) {
          os << m_->carriers[e->type.carrier].elements[e->value];
        }
        break;
      case Op::SetLit:
        if (!e->name.empty()) {
          os << e->name;
        } else if (!e->args.empty()) {
          os << '{';
          for (size_t i = 0; i < e->args.size(); ++i) {
            if (i) os << ", ";
            emit(os, e->args[i], 7);
          }
          os << '}';
        } else {
          os << '{';
          bool first = true;
          if (m_ && e->type.carrier >= 0) {
            const auto& els = m_->carriers[e->type.carrier].elements;
            for (size_t k = 0; k < els.size(); ++k) {
              if (e->value & (std::int64_t{1} << k)) {
                if (!first) os << ", ";
                os << els[k];
                first = false;
              }
            }
          }
          os << '}';
        }
        break;
      case Op::Name:
      case Op::AbsVar:
      case Op::Param:
        os << e->name;
        break;
      case Op::Var:
        os << (m_ ? m_->variables[e->index].name : e->name);
        break;
      case Op::Neg:
        os << '-';
        emit(os, e->args[0], 9);
        break;
      case Op::Not:
        os << "not ";
        emit(os, e->args[0], 5);
        break;
      case Op::Card:
      case Op::Min:
      case Op::Max:
      case Op::Ite: {
        os << (e->op == Op::Card  ? "card"
               : e->op == Op::Min ? "min"
               : e->op == Op::Max ? "max"
                                  : "ite")
           << '(';
        for (size_t i = 0; i < e->args.size(); ++i) {
          if (i) os << ", ";
          emit(os, e->args[i], 0);
        }
        os << ')';
        break;
      }
      case Op::Implies:
        emit(os, e->args[0], p + 1);
        os << ' ' << spelling(e->op) << ' ';
        emit(os, e->args[1], p);
        break;
      case Op::Iff:
        emit(os, e->args[0], p + 1);
        os << ' ' << spelling(e->op) << ' ';
        emit(os, e->args[1], p + 1);
        break;
      default:
        if (p == 6) {
          emit(os, e->args[0], p + 1);
        } else {
          emit(os, e->args[0], p);
        }
        os << ' ' << spelling(e->op) << ' ';
        emit(os, e->args[1], p + 1);
        break;
    }
    if (paren) os << ')';
  }

  const MachineAST* m_;
};

inline std::string type_to_string(const Type& t, const MachineAST& m) {
  switch (t.kind) {
    case Type::Kind::Int:
      return std::to_string(t.lo) + ".." + std::to_string(t.hi);
    case Type::Kind::Bool:
      return "bool";
    case Type::Kind::Set:
      return "set(" + m.carriers[t.carrier].name + ")";
    case Type::Kind::Enum:
      return m.carriers[t.carrier].name;
  }
  return "?";
}

inline void print_actions(std::ostream& os, const std::vector<Action>& actions,
                          const MachineAST& m, const std::string& indent) {
  ExprPrinter ep(&m);
  for (size_t i = 0; i < actions.size(); ++i) {
    const Action& a = actions[i];
    if (i) os << " ||\n" << indent;
    if (a.kind == Action::Kind::Assign) {
      os << a.target << " := " << ep.print(a.value);
    } else {
      os << "any ";
      for (size_t k = 0; k < a.choice_params.size(); ++k) {
        if (k) os << ", ";
        os << a.choice_params[k].name << " : " << type_to_string(a.choice_params[k].type, m);
      }
      if (a.where) os << " where " << ep.print(a.where);
      os << " then ";
      print_actions(os, a.body, m, indent + "  ");
      os << " end";
    }
  }
}

inline void print_event(std::ostream& os, const EventAST& e, const MachineAST& m) {
  ExprPrinter ep(&m);
  os << "  " << e.name;
  if (e.refines) os << " refines " << *e.refines;
  os << '\n';
  if (e.status_given) os << "    status " << to_string(e.status) << '\n';
  if (!e.params.empty()) {
    os << "    any ";
    for (size_t k = 0; k < e.params.size(); ++k) {
      if (k) os << ", ";
      os << e.params[k].name << " : " << type_to_string(e.params[k].type, m);
    }
    os << '\n';
  }
  if (e.guard) os << "    when " << ep.print(e.guard) << '\n';
  if (!e.actions.empty()) {
    os << "    then ";
    print_actions(os, e.actions, m, "         ");
    os << '\n';
  }
  os << "  end\n";
}

}  // namespace detail

inline std::string to_string(const ExprPtr& e, const MachineAST* m = nullptr) {
  return detail::ExprPrinter(m).print(e);
}

/// Renders a machine in the concrete syntax accepted by parse_machine.
inline std::string to_source(const MachineAST& m) {
  std::ostringstream os;
  detail::ExprPrinter ep(&m);
  os << "machine " << m.name;
  if (m.refines) os << " refines " << *m.refines;
  os << '\n';
  if (!m.carriers.empty()) {
    os << "sets\n";
    for (const auto& c : m.carriers) {
      os << "  " << c.name << " = {";
      for (size_t i = 0; i < c.elements.size(); ++i) os << (i ? ", " : "") << c.elements[i];
      os << "}\n";
    }
  }
  if (!m.constants.empty()) {
    os << "constants\n";
    for (const auto& c : m.constants) os << "  " << c.name << " = " << c.value << '\n';
  }
  if (!m.variables.empty()) {
    os << "variables\n";
    for (const auto& v : m.variables)
      os << "  " << v.name << " : " << detail::type_to_string(v.type, m) << '\n';
  }
  if (m.invariant) os << "invariant\n  " << ep.print(m.invariant) << '\n';
  if (m.variant) os << "variant\n  " << ep.print(m.variant) << '\n';
  if (m.linking) os << "linking\n  " << ep.print(m.linking) << '\n';
  os << "events\n";
  detail::print_event(os, m.init, m);
  for (const auto& e : m.events) detail::print_event(os, e, m);
  os << "end\n";
  return os.str();
}

}  // namespace ebltl::dsl
