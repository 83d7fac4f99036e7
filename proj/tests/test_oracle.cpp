#include <catch_amalgamated.hpp>

#include <random>

#include "ebltl/dsl/machine.hpp"
#include "ebltl/ltl/evaluate.hpp"
#include "ebltl/oracle/corpus.hpp"
#include "ebltl/oracle/oracle.hpp"
#include "support.hpp"

using namespace ebltl;
using namespace ebltl::oracle;
using ltl::Trace;

namespace {

const std::vector<std::string> kLetters{"a", "b", "c", "d"};

sem::StateGraph graph_of(const std::string& file) { return sem::explore(dsl::load_machine(corpus(file))); }

}  // namespace

TEST_CASE("reference satisfaction on small traces", "[oracle]") {
  CHECK(oracle_holds_on(Trace::lasso({}, {"pay"}), parse_formula("G F [pay]")));
  CHECK_FALSE(oracle_holds_on(Trace::lasso({"pay"}, {"refill"}), parse_formula("G F [pay]")));
  CHECK_FALSE(oracle_holds_on(Trace::finite({"x"}), parse_formula("G [x]")));
  CHECK(oracle_holds_on(Trace::finite({}), parse_formula("F true")));
  CHECK(oracle_holds_on(Trace::finite({"a", "b"}), parse_formula("[a] U [b]")));
  CHECK_FALSE(oracle_holds_on(Trace::lasso({"a"}, {"a"}), parse_formula("[a] U [b]")));
}

TEST_CASE("reference satisfaction agrees with the evaluator", "[oracle]") {
  std::mt19937 rng(21);
  size_t failures = 0;
  for (int i = 0; i < 1000; ++i) {
    Formula f = random_formula(rng, kLetters, 5);
    Trace u = random_trace(rng, kLetters, 5);
    if (oracle_holds_on(u, f) != ltl::holds_on_trace(u, f)) {
      ++failures;
      UNSCOPED_INFO(to_string(f) << " on " << ltl::to_string(u));
    }
  }
  CHECK(failures == 0);
}

TEST_CASE("reference model checker on the case studies", "[oracle]") {
  auto vm1 = graph_of("vm/vm1.eb");
  auto v = oracle_model_check(vm1, parse_formula("G([selectChoc] => F [dispenseChoc])"));
  CHECK_FALSE(v.holds);
  REQUIRE(v.counterexample);
  CHECK_FALSE(ltl::holds_on_trace(*v.counterexample, parse_formula("G([selectChoc] => F [dispenseChoc])")));
  CHECK(oracle_model_check(vm1, Formula::truth()).holds);

  auto vm4 = graph_of("vm/vm4.eb");
  CHECK(oracle_model_check(vm4, parse_formula("G F ([selectBiscuit] | [selectChoc] | [dispenseBiscuit] | [dispenseChoc])")).holds);

  Formula top = parse_formula("G([top] => F [ground])");
  CHECK(oracle_model_check(graph_of("lift/lift.eb"), top).holds);
  auto doors = graph_of("lift/lift_doors.eb");
  auto w = oracle_model_check(doors, top);
  CHECK_FALSE(w.holds);
  REQUIRE(w.counterexample);
  CHECK_FALSE(ltl::holds_on_trace(*w.counterexample, top));
}

TEST_CASE("trace membership", "[oracle]") {
  auto vm1 = graph_of("vm/vm1.eb");
  CHECK(is_trace_of(vm1, Trace::lasso({"selectChoc"}, {"dispenseChoc", "selectChoc"})));
  CHECK_FALSE(is_trace_of(vm1, Trace::lasso({}, {"dispenseChoc"})));
  // VM1 never deadlocks, so no finite trace is maximal.
  CHECK_FALSE(is_trace_of(vm1, Trace::finite({"selectChoc"})));
}

TEST_CASE("corpus loading", "[oracle]") {
  auto entries = load_corpus(corpus(""));
  REQUIRE(entries.size() == 2);
  CHECK(entries[0].name == "lift");
  CHECK(entries[1].name == "vm");
  CHECK(entries[1].machines.size() == 5);
  CHECK(entries[1].constants.at("capacity") == 2);
}

TEST_CASE("checker and oracle agree on the corpus and random pairs", "[oracle]") {
  auto rep = cross_validate(load_corpus(corpus("")));
  for (const auto& f : rep.failures) UNSCOPED_INFO(f);
  CHECK(rep.ok());
  CHECK(rep.random_pairs == 500);
  CHECK(rep.random_disagreements == 0);
  CHECK(rep.rows.size() >= 30);
  for (const auto& r : rep.rows) CHECK(r.expected.has_value());
}
