#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ebltl::dsl {

/// Semantic type of a variable, parameter, or expression. Integers used as
/// declared domains carry inclusive bounds; sets and enums refer to a carrier
/// by index.
struct Type {
  enum class Kind { Int, Bool, Set, Enum };
  Kind kind = Kind::Int;
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  int carrier = -1;

  static Type integer(std::int64_t lo = 0, std::int64_t hi = 0) {
    return {Kind::Int, lo, hi, -1};
  }
  static Type boolean() { return {Kind::Bool, 0, 1, -1}; }
  static Type set_of(int carrier) { return {Kind::Set, 0, 0, carrier}; }
  static Type enum_of(int carrier) { return {Kind::Enum, 0, 0, carrier}; }

  /// Same kind and carrier; integer bounds are ignored. A set with carrier -1
  /// is the type of `{}` and matches any set.
  bool compatible(const Type& o) const {
    if (kind != o.kind) return false;
    if (kind == Kind::Set) return carrier < 0 || o.carrier < 0 || carrier == o.carrier;
    if (kind == Kind::Enum) return carrier == o.carrier;
    return true;
  }
};

enum class Op {
  IntLit,
  BoolLit,
  ElemLit,   // carrier element, value = element index
  SetLit,    // set display; value = mask once resolved
  Name,      // unresolved identifier
  Var,       // own variable, index into MachineAST::variables
  AbsVar,    // abstract variable (linking only)
  Param,     // event/choice parameter, index into the parameter frame
  Neg,
  Add,
  Sub,       // integer subtraction or set difference before resolution
  Mul,
  Div,
  Mod,
  Min,
  Max,
  Ite,
  Card,
  Union,
  Inter,
  Diff,
  Eq,
  Ne,
  Lt,
  Le,
  Gt,
  Ge,
  In,
  NotIn,
  Subset,
  NotSubset,
  And,
  Or,
  Not,
  Implies,
  Iff,
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  Op op = Op::IntLit;
  std::int64_t value = 0;
  int index = -1;
  std::string name;
  std::vector<ExprPtr> args;
  Type type;
  int line = 0;
  int column = 0;
};

inline std::shared_ptr<Expr> make_expr(Op op, std::vector<ExprPtr> args = {}, int line = 0,
                         int column = 0) {
  auto e = std::make_shared<Expr>();
  e->op = op;
  e->args = std::move(args);
  e->line = line;
  e->column = column;
  return e;
}

struct Carrier {
  std::string name;
  std::vector<std::string> elements;
};

struct Constant {
  std::string name;
  std::int64_t value = 0;
};

/// Declared type as written, kept for pretty-printing; `type` is resolved.
struct Decl {
  std::string name;
  Type type;
  ExprPtr lo_expr;  // integer bounds as written (may reference constants)
  ExprPtr hi_expr;
};

struct Action;

/// `v := E` or `any y : T where P then actions end`.
struct Action {
  enum class Kind { Assign, Choice };
  Kind kind = Kind::Assign;
  std::string target;
  int target_index = -1;
  ExprPtr value;
  std::vector<Decl> choice_params;
  int param_base = 0;  // frame offset of the first choice parameter
  ExprPtr where;
  std::vector<Action> body;
  int line = 0;
  int column = 0;
};

enum class Status { Ordinary, Anticipated, Convergent };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Ordinary:
      return "ordinary";
    case Status::Anticipated:
      return "anticipated";
    case Status::Convergent:
      return "convergent";
  }
  return "?";
}

struct EventAST {
  std::string name;
  Status status = Status::Ordinary;
  bool status_given = false;
  std::vector<Decl> params;
  ExprPtr guard;  // null means `true`
  std::vector<Action> actions;
  std::optional<std::string> refines;
  int frame_size = 0;  // params plus every nested choice parameter
  int line = 0;
};

/// One parsed and typechecked machine.
struct MachineAST {
  std::string name;
  std::optional<std::string> refines;
  std::vector<Carrier> carriers;
  std::vector<Constant> constants;
  std::vector<Decl> variables;
  ExprPtr invariant;             // null means `true`
  ExprPtr variant;               // null when absent
  ExprPtr linking;               // raw until bound against an abstract machine
  bool linking_resolved = false;
  EventAST init;
  std::vector<EventAST> events;  // excludes init

  int variable_index(const std::string& n) const {
    for (size_t i = 0; i < variables.size(); ++i)
      if (variables[i].name == n) return static_cast<int>(i);
    return -1;
  }
  int event_index(const std::string& n) const {
    for (size_t i = 0; i < events.size(); ++i)
      if (events[i].name == n) return static_cast<int>(i);
    return -1;
  }
  /// Event names in declaration order (the machine alphabet).
  std::vector<std::string> alphabet() const {
    std::vector<std::string> out;
    for (const auto& e : events) out.push_back(e.name);
    return out;
  }
  bool has_status(Status s) const {
    for (const auto& e : events)
      if (e.status == s) return true;
    return false;
  }
};

}  // namespace ebltl::dsl
