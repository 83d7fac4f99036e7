#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ebltl/dsl/lexer.hpp"

namespace ebltl {

/// Event-based LTL formula: true | [x] | !f | f | g | f & g | f U g | F f | G f.
/// Immutable; copies share structure.
class Formula {
 public:
  enum class Kind { True, Atom, Not, Or, And, Until, Finally, Globally };

  Formula() : Formula(make(Kind::True, {}, {}, {})) {}

  static Formula truth() { return make(Kind::True, {}, {}, {}); }
  static Formula atom(std::string event) { return make(Kind::Atom, std::move(event), {}, {}); }
  static Formula negation(Formula f) { return make(Kind::Not, {}, std::move(f), {}); }
  static Formula disjunction(Formula a, Formula b) {
    return make(Kind::Or, {}, std::move(a), std::move(b));
  }
  static Formula conjunction(Formula a, Formula b) {
    return make(Kind::And, {}, std::move(a), std::move(b));
  }
  static Formula until(Formula a, Formula b) {
    return make(Kind::Until, {}, std::move(a), std::move(b));
  }
  static Formula finally(Formula f) { return make(Kind::Finally, {}, std::move(f), {}); }
  static Formula globally(Formula f) { return make(Kind::Globally, {}, std::move(f), {}); }
  /// `a => b`, stored as `!a | b`.
  static Formula implies(Formula a, Formula b) {
    return disjunction(negation(std::move(a)), std::move(b));
  }
  /// `!true`, the empty disjunction.
  static Formula falsity() { return negation(truth()); }

  Kind kind() const { return node_->kind; }
  const std::string& event() const { return node_->event; }
  const Formula& lhs() const { return *node_->lhs; }
  const Formula& rhs() const { return *node_->rhs; }
  const Formula& operand() const { return *node_->lhs; }

  bool is_binary() const {
    return kind() == Kind::Or || kind() == Kind::And || kind() == Kind::Until;
  }
  bool is_unary() const {
    return kind() == Kind::Not || kind() == Kind::Finally || kind() == Kind::Globally;
  }

  /// Structural equality.
  friend bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
      case Kind::True:
        return true;
      case Kind::Atom:
        return a.event() == b.event();
      case Kind::Not:
      case Kind::Finally:
      case Kind::Globally:
        return a.operand() == b.operand();
      default:
        return a.lhs() == b.lhs() && a.rhs() == b.rhs();
    }
  }
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

  size_t depth() const {
    if (is_binary()) return 1 + std::max(lhs().depth(), rhs().depth());
    if (is_unary()) return 1 + operand().depth();
    return 0;
  }

  /// Every subformula in post-order (children before parents), duplicates
  /// included.
  void post_order(std::vector<Formula>& out) const {
    if (is_binary()) {
      lhs().post_order(out);
      rhs().post_order(out);
    } else if (is_unary()) {
      operand().post_order(out);
    }
    out.push_back(*this);
  }

 private:
  struct Node {
    Kind kind;
    std::string event;
    std::shared_ptr<const Formula> lhs;
    std::shared_ptr<const Formula> rhs;
  };

  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static Formula make(Kind k, std::string event, std::optional<Formula> l,
                      std::optional<Formula> r) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->event = std::move(event);
    if (l) n->lhs = std::make_shared<const Formula>(std::move(*l));
    if (r) n->rhs = std::make_shared<const Formula>(std::move(*r));
    return Formula(std::move(n));
  }

  std::shared_ptr<const Node> node_;
};

using EventSet = std::set<std::string>;

/// Events mentioned in a formula.
inline EventSet alphabet(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::True:
      return {};
    case Formula::Kind::Atom:
      return {f.event()};
    case Formula::Kind::Not:
    case Formula::Kind::Finally:
    case Formula::Kind::Globally:
      return alphabet(f.operand());
    default: {
      EventSet s = alphabet(f.lhs());
      EventSet r = alphabet(f.rhs());
      s.insert(r.begin(), r.end());
      return s;
    }
  }
}

namespace detail {

// Binding strength used by the printer; mirrors the parser's grammar.
inline int formula_prec(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Or:
      if (f.lhs().kind() == K::Not) return 1;  // printed as implication
      return 2;
    case K::And:
      return 3;
    case K::Until:
      return 4;
    case K::Not:
    case K::Finally:
    case K::Globally:
      return 5;
    default:
      return 6;
  }
}

inline void print_formula(std::ostream& os, const Formula& f, int min_prec) {
  using K = Formula::Kind;
  int p = formula_prec(f);
  bool paren = p < min_prec;
  if (paren) os << '(';
  switch (f.kind()) {
    case K::True:
      os << "true";
      break;
    case K::Atom:
      os << '[' << f.event() << ']';
      break;
    case K::Not:
      os << '!';
      print_formula(os, f.operand(), 5);
      break;
    case K::Finally:
      os << "F ";
      print_formula(os, f.operand(), 5);
      break;
    case K::Globally:
      os << "G ";
      print_formula(os, f.operand(), 5);
      break;
    case K::Or:
      if (p == 1) {
        print_formula(os, f.lhs().operand(), 2);
        os << " => ";
        print_formula(os, f.rhs(), 1);
      } else {
        print_formula(os, f.lhs(), 2);
        os << " | ";
        print_formula(os, f.rhs(), 3);
      }
      break;
    case K::And:
      print_formula(os, f.lhs(), 3);
      os << " & ";
      print_formula(os, f.rhs(), 4);
      break;
    case K::Until:
      print_formula(os, f.lhs(), 5);
      os << " U ";
      print_formula(os, f.rhs(), 4);
      break;
  }
  if (paren) os << ')';
}

class FormulaParser {
 public:
  explicit FormulaParser(std::string_view src) : ts_(dsl::tokenize(src)) {}

  Formula parse() {
    if (ts_.at_end()) ts_.fail("empty formula");
    Formula f = implication();
    if (!ts_.at_end()) ts_.fail("trailing input after formula");
    return f;
  }

 private:
  bool peek_any(std::initializer_list<std::string_view> ops) const {
    for (auto o : ops)
      if (ts_.peek().is(o)) return true;
    return false;
  }

  Formula implication() {
    Formula l = disjunction();
    if (peek_any({"=>"})) {
      ts_.next();
      return Formula::implies(l, implication());
    }
    return l;
  }

  Formula disjunction() {
    Formula l = conjunction();
    while (peek_any({"|", "or", "\\/"})) {
      ts_.next();
      l = Formula::disjunction(l, conjunction());
    }
    return l;
  }

  Formula conjunction() {
    Formula l = until();
    while (peek_any({"&", "/\\"})) {
      ts_.next();
      l = Formula::conjunction(l, until());
    }
    return l;
  }

  Formula until() {
    Formula l = unary();
    if (peek_any({"U"})) {
      ts_.next();
      return Formula::until(l, until());
    }
    return l;
  }

  Formula unary() {
    if (peek_any({"!", "not"})) {
      ts_.next();
      return Formula::negation(unary());
    }
    if (peek_any({"G"})) {
      ts_.next();
      return Formula::globally(unary());
    }
    if (peek_any({"F"})) {
      ts_.next();
      return Formula::finally(unary());
    }
    return primary();
  }

  Formula primary() {
    if (peek_any({"true", "TRUE"})) {
      ts_.next();
      return Formula::truth();
    }
    if (peek_any({"false", "FALSE"})) {
      ts_.next();
      return Formula::falsity();
    }
    if (ts_.accept("[")) {
      std::string e = ts_.expect_ident("event name");
      ts_.expect("]");
      return Formula::atom(std::move(e));
    }
    if (ts_.accept("(")) {
      Formula f = implication();
      ts_.expect(")");
      return f;
    }
    ts_.fail("expected a formula");
  }

  dsl::TokenStream ts_;
};

}  // namespace detail

/// Parses the ASCII formula syntax; `a => b` becomes `!a | b`.
inline Formula parse_formula(std::string_view source) {
  return detail::FormulaParser(source).parse();
}

/// Renders a formula so that parse_formula yields a structurally equal AST.
inline std::string to_string(const Formula& f) {
  std::ostringstream os;
  detail::print_formula(os, f, 0);
  return os.str();
}

/// Disjunction of atoms in the given (already canonical) order; the empty
/// disjunction is `!true`.
inline Formula atom_disjunction(const std::vector<std::string>& events) {
  if (events.empty()) return Formula::falsity();
  Formula f = Formula::atom(events.front());
  for (size_t i = 1; i < events.size(); ++i)
    f = Formula::disjunction(f, Formula::atom(events[i]));
  return f;
}

}  // namespace ebltl
