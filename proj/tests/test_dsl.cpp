#include <catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "ebltl/dsl/machine.hpp"
#include "ebltl/dsl/print.hpp"
#include "ebltl/formula.hpp"
#include "support.hpp"

using namespace ebltl;
using namespace ebltl::dsl;

TEST_CASE("VM1 parses into four ordinary events over a set variable", "[dsl]") {
  MachineAST m = load_machine(corpus("vm/vm1.eb"));
  CHECK(m.name == "VM1");
  REQUIRE(m.events.size() == 4);
  CHECK(m.alphabet() ==
        std::vector<std::string>{"selectBiscuit", "selectChoc", "dispenseBiscuit", "dispenseChoc"});
  for (const auto& e : m.events) CHECK(e.status == Status::Ordinary);
  REQUIRE(m.variables.size() == 1);
  CHECK(m.variables[0].name == "chosen");
  CHECK(m.variables[0].type.kind == Type::Kind::Set);
  CHECK(m.carriers[m.variables[0].type.carrier].elements ==
        std::vector<std::string>{"choc", "biscuit"});
  CHECK(m.init.actions.size() == 1);
  CHECK_FALSE(m.variant);
}

TEST_CASE("init-only machine has no events", "[dsl]") {
  MachineAST m = parse_machine(R"(
machine Tiny
variables
  flag : bool
events
  init then flag := FALSE end
end)");
  CHECK(m.events.empty());
  CHECK(m.variables.size() == 1);
}

TEST_CASE("missing final end reports end-of-input with a position", "[dsl]") {
  std::string src = read_text_file(corpus("vm/vm1.eb"));
  auto pos = src.rfind("end");
  src.erase(pos);
  try {
    parse_machine(src);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK_THAT(std::string(e.what()), Catch::Matchers::ContainsSubstring("end-of-input"));
    CHECK(e.line() > 0);
    CHECK(e.column() > 0);
  }
}

TEST_CASE("every corpus machine parses", "[dsl]") {
  for (auto f : {"vm/vm0.eb", "vm/vm1.eb", "vm/vm2.eb", "vm/vm3.eb", "vm/vm4.eb",
                 "lift/lift.eb", "lift/lift_doors.eb"})
    CHECK_NOTHROW(load_machine(corpus(f)));
}

TEST_CASE("static errors", "[dsl]") {
  auto err = [](const std::string& src) {
    try {
      parse_machine(src);
    } catch (const TypeError& e) {
      return std::string(e.what());
    } catch (const ParseError& e) {
      return "parse: " + std::string(e.what());
    }
    return std::string("no error");
  };
  using Catch::Matchers::ContainsSubstring;
  CHECK_THAT(err("machine M variables x : NAT events init then x := 0 end end"),
             ContainsSubstring("unbounded integer"));
  CHECK_THAT(err("machine M variables x : 0..2 events init then x := y end end"),
             ContainsSubstring("unknown identifier 'y'"));
  CHECK_THAT(err("machine M variables x : 0..2 events init then x := TRUE end end"),
             ContainsSubstring("type mismatch"));
  CHECK_THAT(err("machine M variables x : 0..2 events init then x := 0 end "
                 "e status ordinary then x := 1 end e status ordinary then x := 2 end end"),
             ContainsSubstring("duplicate event name 'e'"));
  CHECK_THAT(err("machine M variables x : 0..2 events init then x := 0 end "
                 "e status ordinary then x := 1 || x := 2 end end"),
             ContainsSubstring("assigned twice"));
  CHECK_THAT(err("machine M variables x : 0..2 events init then x := 0 end "
                 "e then x := 1 end end"),
             ContainsSubstring("needs a status"));
  CHECK_THAT(err("machine M variables x : 0..2 variant x events init then x := 0 end "
                 "e status ordinary then x := 1 end end"),
             ContainsSubstring("no anticipated or convergent"));
  CHECK_THAT(err("machine M variables x : 0..2 events init then x := 0 end "
                 "e status convergent then x := 1 end end"),
             ContainsSubstring("no variant"));
  CHECK_THAT(err("machine M variables x : 0..2 y : bool events init then x := 0 end end"),
             ContainsSubstring("does not assign variable 'y'"));
  CHECK_THAT(err("machine M variables x : 0..2 events init then x := 0 end "
                 "e status ordinary any p : 3..1 then x := 1 end end"),
             ContainsSubstring("empty domain"));
}

TEST_CASE("abstract variables are only legal in the linking clause", "[dsl]") {
  MachineAST vm3 = load_machine(corpus("vm/vm3.eb"));
  // VM4 mentions stocked in linking only: accepted.
  MachineAST vm4 = load_machine(corpus("vm/vm4.eb"), {}, &vm3);
  CHECK(vm4.linking_resolved);
  // The same reference inside a guard is rejected.
  std::string src = read_text_file(corpus("vm/vm4.eb"));
  auto at = src.find("when chocStock = 0 & biscuitStock = 0");
  REQUIRE(at != std::string::npos);
  src.replace(at, 4, "when choc : stocked &");
  try {
    parse_machine(src, {}, &vm3);
    FAIL("expected a type error");
  } catch (const TypeError& e) {
    CHECK_THAT(std::string(e.what()),
               Catch::Matchers::ContainsSubstring("may only appear in the linking clause"));
  }
}

TEST_CASE("constant overrides replace declared values", "[dsl]") {
  MachineAST m = load_machine(corpus("vm/vm4.eb"), {{"capacity", 3}});
  auto it = std::find_if(m.constants.begin(), m.constants.end(),
                         [](const auto& c) { return c.name == "capacity"; });
  REQUIRE(it != m.constants.end());
  CHECK(it->value == 3);
  CHECK(m.variables[m.variable_index("chocStock")].type.hi == 3);
  CHECK_THROWS_AS(load_machine(corpus("vm/vm4.eb"), {{"nosuch", 1}}), TypeError);
}

TEST_CASE("unicode operators are accepted", "[dsl]") {
  MachineAST m = parse_machine(R"(
machine U
sets S = {a, b}
variables s : set(S)
invariant s ⊆ {a, b} ∧ (a ∈ s ⇒ b ∉ s)
events
  init then s := ∅ end
  add status ordinary when a ∉ s ∧ b ∉ s then s := s ∪ {a} end
end)");
  CHECK(m.events.size() == 1);
}

TEST_CASE("machine pretty-printing round-trips", "[dsl]") {
  for (auto f : {"vm/vm0.eb", "vm/vm1.eb", "vm/vm2.eb", "vm/vm3.eb", "vm/vm4.eb",
                 "lift/lift.eb", "lift/lift_doors.eb"}) {
    MachineAST a = load_machine(corpus(f));
    std::string once = to_source(a);
    MachineAST b = parse_machine(once);
    CHECK(to_source(b) == once);
    CHECK(b.events.size() == a.events.size());
  }
}

TEST_CASE("formula parsing", "[dsl]") {
  Formula phi4 = parse_formula("G([selectChoc] => F [dispenseChoc])");
  Formula expect = Formula::globally(Formula::disjunction(
      Formula::negation(Formula::atom("selectChoc")),
      Formula::finally(Formula::atom("dispenseChoc"))));
  CHECK(phi4 == expect);
  CHECK(parse_formula("true") == Formula::truth());

  Formula phi2 =
      parse_formula("(!(G F [selectBiscuit])) => G([selectChoc] => F [dispenseChoc])");
  CHECK(phi2 == Formula::implies(Formula::negation(Formula::globally(Formula::finally(
                                     Formula::atom("selectBiscuit")))),
                                 expect));

  CHECK(parse_formula("[a] U [b] U [c]") ==
        Formula::until(Formula::atom("a"), Formula::until(Formula::atom("b"), Formula::atom("c"))));
  CHECK(parse_formula("[a] | [b] & [c]") ==
        Formula::disjunction(Formula::atom("a"),
                             Formula::conjunction(Formula::atom("b"), Formula::atom("c"))));
  CHECK(parse_formula("false") == Formula::falsity());
  CHECK_THROWS_AS(parse_formula(""), ParseError);
  CHECK_THROWS_AS(parse_formula("G ("), ParseError);
  CHECK_THROWS_AS(parse_formula("[a] [b]"), ParseError);
  CHECK_THROWS_AS(parse_formula("[]"), ParseError);
}

TEST_CASE("formula printing round-trips on random formulas", "[dsl]") {
  std::mt19937 rng(7);
  for (int i = 0; i < 2000; ++i) {
    Formula f = random_formula(rng, {"a", "b", "c", "d"}, 5);
    std::string s = to_string(f);
    INFO(s);
    CHECK(parse_formula(s) == f);
  }
}
