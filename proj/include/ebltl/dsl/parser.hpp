#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <string_view>

#include "ebltl/dsl/ast.hpp"
#include "ebltl/dsl/lexer.hpp"

namespace ebltl::dsl {

namespace detail {

inline bool is_reserved(std::string_view s) {
  static const std::set<std::string_view> kw = {
      "machine", "refines",  "sets",   "constants", "variables", "invariant",
      "invariants", "variant", "linking", "events", "status", "any",
      "where",   "when",     "then",   "end",       "skip",      "or",
      "not",     "mod",      "card",   "min",       "max",       "ite",
      "TRUE",    "FALSE",    "true",   "false"};
  return kw.count(s) != 0;
}

inline bool is_section_keyword(std::string_view s) {
  static const std::set<std::string_view> kw = {
      "machine", "refines", "sets",  "constants", "variables", "invariant",
      "invariants", "variant", "linking", "events", "status", "any",
      "where",   "when",    "then",  "end"};
  return kw.count(s) != 0;
}

/// Recursive-descent parser producing an unresolved AST.
class MachineParser {
 public:
  explicit MachineParser(std::string_view src) : ts_(tokenize(src)) {}

  MachineAST parse_machine() {
    MachineAST m;
    ts_.expect("machine");
    m.name = ts_.expect_ident("machine name");
    if (ts_.accept("refines")) m.refines = ts_.expect_ident("abstract machine name");

    if (ts_.accept("sets")) {
      while (starts_name()) {
        Carrier c;
        c.name = ts_.expect_ident();
        ts_.expect("=");
        ts_.expect("{");
        if (!ts_.peek().is("}")) {
          do {
            c.elements.push_back(ts_.expect_ident("carrier element"));
          } while (ts_.accept(","));
        }
        ts_.expect("}");
        m.carriers.push_back(std::move(c));
      }
    }
    if (ts_.accept("constants")) {
      while (starts_name()) {
        const Token& t = ts_.peek();
        Decl d;
        d.name = ts_.expect_ident();
        ts_.expect("=");
        d.lo_expr = parse_expr();
        d.lo_expr = tag(d.lo_expr, t);
        raw_constants_.push_back(std::move(d));
      }
    }
    if (ts_.accept("variables")) {
      while (starts_name()) {
        Decl d;
        d.name = ts_.expect_ident("variable name");
        ts_.expect(":");
        parse_type(d);
        m.variables.push_back(std::move(d));
      }
    }
    if (ts_.accept("invariant") || ts_.accept("invariants")) m.invariant = parse_clause_list();
    if (ts_.accept("variant")) m.variant = parse_expr();
    if (ts_.accept("linking")) m.linking = parse_clause_list();

    ts_.expect("events");
    bool have_init = false;
    while (!ts_.peek().is("end")) {
      if (ts_.at_end()) ts_.fail("expected 'end' closing the machine");
      EventAST e = parse_event();
      if (e.name == "init" || e.name == "INITIALISATION") {
        if (have_init) throw TypeError("duplicate init event", e.line, 1);
        have_init = true;
        e.name = "init";
        m.init = std::move(e);
      } else {
        m.events.push_back(std::move(e));
      }
    }
    ts_.expect("end");
    if (!ts_.at_end()) ts_.fail("expected end-of-input after machine");
    if (!have_init) throw TypeError("machine has no init event", 0, 0);
    return m;
  }

  ExprPtr parse_standalone_expr() {
    ExprPtr e = parse_expr();
    if (!ts_.at_end()) ts_.fail("trailing input after expression");
    return e;
  }

  std::vector<Decl> take_constants() { return std::move(raw_constants_); }

 private:
  bool starts_name() const {
    const Token& t = ts_.peek();
    return t.kind == Tok::Ident && !is_reserved(t.text);
  }

  bool starts_expr() const {
    const Token& t = ts_.peek();
    switch (t.kind) {
      case Tok::Int:
        return true;
      case Tok::Ident:
        return !is_section_keyword(t.text);
      case Tok::Sym:
        return t.text == "(" || t.text == "{" || t.text == "-";
      case Tok::End:
        return false;
    }
    return false;
  }

  static ExprPtr tag(ExprPtr e, const Token& t) {
    if (e->line == 0) {
      auto copy = std::make_shared<Expr>(*e);
      copy->line = t.line;
      copy->column = t.column;
      return copy;
    }
    return e;
  }

  ExprPtr parse_clause_list() {
    ExprPtr acc = parse_expr();
    while (starts_expr()) {
      const Token& t = ts_.peek();
      acc = make_expr(Op::And, {acc, parse_expr()}, t.line, t.column);
    }
    return acc;
  }

  void parse_type(Decl& d) {
    const Token& t = ts_.peek();
    if (t.kind == Tok::Ident && !ts_.peek(1).is("..") && !is_arith(ts_.peek(1))) {
      std::string n = ts_.next().text;
      if (n == "bool" || n == "BOOL") {
        d.type = Type::boolean();
        return;
      }
      if (n == "set" || n == "POW") {
        ts_.expect("(");
        auto c = std::make_shared<Expr>();
        c->op = Op::Name;
        c->name = ts_.expect_ident("carrier name");
        c->line = t.line;
        c->column = t.column;
        ts_.expect(")");
        d.type = Type::set_of(-1);
        d.lo_expr = c;
        return;
      }
      if (n == "NAT" || n == "NAT1" || n == "INT" || n == "nat" || n == "int" ||
          n == "integer" || n == "natural") {
        throw TypeError("unbounded integer variable '" + d.name +
                            "': declare explicit bounds lo..hi",
                        t.line, t.column);
      }
      auto c = std::make_shared<Expr>();
      c->op = Op::Name;
      c->name = n;
      c->line = t.line;
      c->column = t.column;
      d.type = Type::enum_of(-1);
      d.lo_expr = c;
      return;
    }
    d.type = Type::integer();
    d.lo_expr = parse_additive();
    ts_.expect("..");
    d.hi_expr = parse_additive();
  }

  static bool is_arith(const Token& t) {
    return t.kind == Tok::Sym &&
           (t.text == "+" || t.text == "-" || t.text == "*" || t.text == "/");
  }

  EventAST parse_event() {
    EventAST e;
    e.line = ts_.peek().line;
    if (ts_.peek().kind != Tok::Ident || is_reserved(ts_.peek().text))
      ts_.fail("expected event name");
    e.name = ts_.next().text;
    if (ts_.accept("refines")) e.refines = ts_.expect_ident("abstract event name");
    if (ts_.accept("status")) {
      const Token& t = ts_.peek();
      std::string s = ts_.expect_ident("event status");
      if (s == "ordinary")
        e.status = Status::Ordinary;
      else if (s == "anticipated")
        e.status = Status::Anticipated;
      else if (s == "convergent")
        e.status = Status::Convergent;
      else
        throw ParseError("unknown status '" + s + "'", t.line, t.column);
      e.status_given = true;
    }
    if (ts_.accept("any")) e.params = parse_param_list();
    if (ts_.accept("where") || ts_.accept("when")) e.guard = parse_clause_list();
    if (ts_.accept("then")) e.actions = parse_actions();
    ts_.expect("end");
    return e;
  }

  std::vector<Decl> parse_param_list() {
    std::vector<Decl> ps;
    do {
      Decl d;
      d.name = ts_.expect_ident("parameter name");
      ts_.expect(":");
      parse_type(d);
      ps.push_back(std::move(d));
    } while (ts_.accept(","));
    return ps;
  }

  bool starts_action() const {
    const Token& t = ts_.peek();
    if (t.is("any") || t.is("skip")) return true;
    return t.kind == Tok::Ident && !is_reserved(t.text) && ts_.peek(1).is(":=");
  }

  std::vector<Action> parse_actions() {
    std::vector<Action> out;
    while (true) {
      if (!starts_action()) ts_.fail("expected an action");
      if (ts_.accept("skip")) {
        // no-op
      } else {
        out.push_back(parse_action());
      }
      if (ts_.accept("||")) continue;
      if (starts_action()) continue;
      break;
    }
    return out;
  }

  Action parse_action() {
    Action a;
    const Token& t = ts_.peek();
    a.line = t.line;
    a.column = t.column;
    if (ts_.accept("any")) {
      a.kind = Action::Kind::Choice;
      a.choice_params = parse_param_list();
      if (ts_.accept("where")) a.where = parse_clause_list();
      ts_.expect("then");
      a.body = parse_actions();
      ts_.expect("end");
      return a;
    }
    a.kind = Action::Kind::Assign;
    a.target = ts_.expect_ident("assignment target");
    ts_.expect(":=");
    a.value = parse_expr();
    return a;
  }

 public:
  ExprPtr parse_expr() { return parse_iff(); }

 private:
  ExprPtr bin(Op op, ExprPtr l, ExprPtr r, const Token& t) {
    return make_expr(op, {std::move(l), std::move(r)}, t.line, t.column);
  }

  ExprPtr parse_iff() {
    ExprPtr l = parse_implies();
    if (ts_.peek().is("<=>")) {
      Token t = ts_.next();
      return bin(Op::Iff, l, parse_implies(), t);
    }
    return l;
  }

  ExprPtr parse_implies() {
    ExprPtr l = parse_or();
    if (ts_.peek().is("=>")) {
      Token t = ts_.next();
      return bin(Op::Implies, l, parse_implies(), t);
    }
    return l;
  }

  ExprPtr parse_or() {
    ExprPtr l = parse_and();
    while (ts_.peek().is("or")) {
      Token t = ts_.next();
      l = bin(Op::Or, l, parse_and(), t);
    }
    return l;
  }

  ExprPtr parse_and() {
    ExprPtr l = parse_not();
    while (ts_.peek().is("&")) {
      Token t = ts_.next();
      l = bin(Op::And, l, parse_not(), t);
    }
    return l;
  }

  ExprPtr parse_not() {
    if (ts_.peek().is("not")) {
      Token t = ts_.next();
      return make_expr(Op::Not, {parse_not()}, t.line, t.column);
    }
    return parse_relation();
  }

  ExprPtr parse_relation() {
    ExprPtr l = parse_additive();
    static const std::map<std::string_view, Op> rel = {
        {"=", Op::Eq},  {"/=", Op::Ne},    {"!=", Op::Ne},   {"<", Op::Lt},
        {"<=", Op::Le}, {">", Op::Gt},     {">=", Op::Ge},   {":", Op::In},
        {"/:", Op::NotIn}, {"<:", Op::Subset}, {"/<:", Op::NotSubset}};
    const Token& t = ts_.peek();
    if (t.kind == Tok::Sym) {
      auto it = rel.find(t.text);
      if (it != rel.end()) {
        Token tt = ts_.next();
        return bin(it->second, l, parse_additive(), tt);
      }
    }
    return l;
  }

  ExprPtr parse_additive() {
    ExprPtr l = parse_multiplicative();
    while (true) {
      const Token& t = ts_.peek();
      Op op;
      if (t.is("+"))
        op = Op::Add;
      else if (t.is("-"))
        op = Op::Sub;
      else if (t.is("\\/"))
        op = Op::Union;
      else if (t.is("/\\"))
        op = Op::Inter;
      else
        break;
      Token tt = ts_.next();
      l = bin(op, l, parse_multiplicative(), tt);
    }
    return l;
  }

  ExprPtr parse_multiplicative() {
    ExprPtr l = parse_unary();
    while (true) {
      const Token& t = ts_.peek();
      Op op;
      if (t.is("*"))
        op = Op::Mul;
      else if (t.is("/"))
        op = Op::Div;
      else if (t.is("mod"))
        op = Op::Mod;
      else
        break;
      Token tt = ts_.next();
      l = bin(op, l, parse_unary(), tt);
    }
    return l;
  }

  ExprPtr parse_unary() {
    if (ts_.peek().is("-")) {
      Token t = ts_.next();
      return make_expr(Op::Neg, {parse_unary()}, t.line, t.column);
    }
    return parse_primary();
  }

  ExprPtr call(Op op, size_t arity, const Token& t) {
    ts_.expect("(");
    std::vector<ExprPtr> args;
    for (size_t i = 0; i < arity; ++i) {
      if (i) ts_.expect(",");
      args.push_back(parse_expr());
    }
    ts_.expect(")");
    return make_expr(op, std::move(args), t.line, t.column);
  }

  ExprPtr parse_primary() {
    Token t = ts_.peek();
    if (t.kind == Tok::Int) {
      ts_.next();
      auto e = make_expr(Op::IntLit, {}, t.line, t.column);
      e->value = t.value;
      return e;
    }
    if (t.is("TRUE") || t.is("true") || t.is("FALSE") || t.is("false")) {
      ts_.next();
      auto e = make_expr(Op::BoolLit, {}, t.line, t.column);
      e->value = (t.text == "TRUE" || t.text == "true") ? 1 : 0;
      return e;
    }
    if (t.is("card")) {
      ts_.next();
      return call(Op::Card, 1, t);
    }
    if (t.is("min")) {
      ts_.next();
      return call(Op::Min, 2, t);
    }
    if (t.is("max")) {
      ts_.next();
      return call(Op::Max, 2, t);
    }
    if (t.is("ite")) {
      ts_.next();
      return call(Op::Ite, 3, t);
    }
    if (t.is("(")) {
      ts_.next();
      ExprPtr e = parse_expr();
      ts_.expect(")");
      return e;
    }
    if (t.is("{")) {
      ts_.next();
      std::vector<ExprPtr> elems;
      if (!ts_.peek().is("}")) {
        do {
          elems.push_back(parse_additive());
        } while (ts_.accept(","));
      }
      ts_.expect("}");
      return make_expr(Op::SetLit, std::move(elems), t.line, t.column);
    }
    if (t.kind == Tok::Ident && !is_reserved(t.text)) {
      ts_.next();
      auto e = make_expr(Op::Name, {}, t.line, t.column);
      e->name = t.text;
      return e;
    }
    ts_.fail("expected an expression");
  }

  TokenStream ts_;
  std::vector<Decl> raw_constants_;
};

}  // namespace detail

}  // namespace ebltl::dsl
