#include <catch_amalgamated.hpp>

#include <random>

#include "ebltl/dsl/machine.hpp"
#include "ebltl/formula.hpp"
#include "ebltl/ltl/evaluate.hpp"
#include "ebltl/ltl/model_check.hpp"
#include "ebltl/oracle/corpus.hpp"
#include "ebltl/refine/chain.hpp"
#include "ebltl/sem/explore.hpp"
#include "support.hpp"

using namespace ebltl;
using namespace ebltl::ltl;

namespace {

const refine::RefinementChain& vm_chain() {
  static const auto c = refine::load_chain(corpus("vm/chain.json"));
  return c;
}

Formula prop(const std::string& name) { return parse_formula(vm_chain().properties.at(name)); }

const sem::StateGraph& vm_graph(size_t i) {
  static std::map<size_t, sem::StateGraph> cache;
  auto it = cache.find(i);
  if (it == cache.end()) it = cache.emplace(i, sem::explore(vm_chain().machines[i])).first;
  return it->second;
}

Trace suffix(const Trace& u, size_t i) {
  if (!u.is_lasso()) return Trace::finite({u.prefix.begin() + std::min(i, u.prefix.size()), u.prefix.end()});
  if (i < u.prefix.size()) return Trace::lasso({u.prefix.begin() + i, u.prefix.end()}, u.cycle);
  size_t r = (i - u.prefix.size()) % u.cycle.size();
  std::vector<std::string> c(u.cycle.begin() + r, u.cycle.end());
  c.insert(c.end(), u.cycle.begin(), u.cycle.begin() + r);
  return Trace::lasso({}, c);
}

const std::vector<std::string> kLetters{"a", "b", "c", "d"};

}  // namespace

TEST_CASE("alphabet follows the inductive definition", "[ltl]") {
  CHECK(alphabet(prop("phi2")) == EventSet{"selectBiscuit", "selectChoc", "dispenseChoc"});
  CHECK(alphabet(Formula::truth()).empty());
  CHECK(alphabet(parse_formula("G [pay] & F [refill]")) == EventSet{"pay", "refill"});
}

TEST_CASE("satisfaction on lassos and finite traces", "[ltl]") {
  CHECK(holds_on_trace(Trace::lasso({}, {"pay"}), parse_formula("G F [pay]")));
  CHECK_FALSE(holds_on_trace(Trace::lasso({"selectChoc", "selectBiscuit"},
                                          {"dispenseBiscuit", "selectBiscuit"}),
                             prop("phi4")));
  CHECK_FALSE(holds_on_trace(Trace::finite({}), parse_formula("[x]")));
  CHECK(holds_on_trace(Trace::finite({"x"}), parse_formula("[x]")));
}

TEST_CASE("finite-trace reading of G, F and U", "[ltl]") {
  // G quantifies over the empty suffix too, so G[x] never holds on a finite trace.
  CHECK_FALSE(holds_on_trace(Trace::finite({"x", "x"}), parse_formula("G [x]")));
  CHECK(holds_on_trace(Trace::finite({"x", "x"}), parse_formula("G ([x] | !F [x])")));
  CHECK(holds_on_trace(Trace::finite({"a", "b"}), parse_formula("F [b]")));
  CHECK_FALSE(holds_on_trace(Trace::finite({"a", "a"}), parse_formula("[a] U [b]")));
  CHECK(holds_on_trace(Trace::finite({"a", "b"}), parse_formula("[a] U [b]")));
  CHECK(holds_on_trace(Trace::finite({}), parse_formula("F true")));
  CHECK(holds_on_trace(Trace::finite({}), parse_formula("G !F [x]")));
}

TEST_CASE("projection", "[ltl]") {
  CHECK(project_trace(Trace::lasso({"pay", "refill"}, {"pay"}), {"pay"}) ==
        Trace::lasso({"pay"}, {"pay"}));
  Trace u = Trace::lasso({"a", "b"}, {"c", "a"});
  CHECK(project_trace(u, {"a", "b", "c"}) == u);
  CHECK(project_trace(Trace::lasso({"a"}, {"b"}), {"a"}) == Trace::finite({"a"}));
}

TEST_CASE("VM1 verdicts", "[ltl]") {
  const auto& g = vm_graph(0);
  for (auto p : {"phi1", "phi2", "phi3"}) CHECK(model_check(g, prop(p)).holds);
  auto v = model_check(g, prop("phi4"));
  REQUIRE_FALSE(v.holds);
  REQUIRE(v.counterexample);
  CHECK(v.counterexample->is_lasso());
  CHECK(events_of(*v.counterexample).count("selectChoc"));
  CHECK(EventSet(v.counterexample->cycle.begin(), v.counterexample->cycle.end()) ==
        EventSet{"selectBiscuit", "dispenseBiscuit"});
  CHECK_FALSE(holds_on_trace(*v.counterexample, prop("phi4")));
  CHECK_FALSE(model_check(g, prop("phi5")).holds);
}

TEST_CASE("VM2 verdicts", "[ltl]") {
  const auto& g = vm_graph(1);
  CHECK(model_check(g, prop("phi7")).holds);
  for (auto p : {"phi1", "phi2", "phi3", "phi6"}) {
    auto v = model_check(g, prop(p));
    CHECK_FALSE(v.holds);
    REQUIRE(v.counterexample);
    CHECK_FALSE(holds_on_trace(*v.counterexample, prop(p)));
    CHECK(oracle::is_trace_of(g, *v.counterexample));
  }
}

TEST_CASE("VM2 refutes phi1-phi3 by pumping pay", "[ltl]") {
  const auto& g = vm_graph(1);
  for (auto p : {"phi1", "phi2", "phi3"}) {
    auto v = model_check(g, prop(p));
    REQUIRE(v.counterexample);
    CHECK(v.counterexample->is_lasso());
    CHECK(EventSet(v.counterexample->cycle.begin(), v.counterexample->cycle.end()) ==
          EventSet{"pay"});
  }
}

TEST_CASE("VM4 satisfies phi1-phi7", "[ltl]") {
  const auto& g = vm_graph(3);
  for (int i = 1; i <= 7; ++i) CHECK(model_check(g, prop("phi" + std::to_string(i))).holds);
}

TEST_CASE("foreign atoms never occur and raise a warning", "[ltl]") {
  auto v = model_check(vm_graph(0), parse_formula("G ![pay]"));
  CHECK(v.holds);
  CHECK_FALSE(v.warnings.empty());
}

TEST_CASE("derived operators agree with their definitions", "[ltl]") {
  std::mt19937 rng(7);
  for (int i = 0; i < 500; ++i) {
    Formula f = random_formula(rng, kLetters, 3);
    Trace u = random_trace(rng, kLetters, 4);
    CHECK(holds_on_trace(u, Formula::finally(f)) ==
          holds_on_trace(u, Formula::until(Formula::truth(), f)));
    CHECK(holds_on_trace(u, Formula::globally(f)) ==
          holds_on_trace(u, Formula::negation(Formula::finally(Formula::negation(f)))));
  }
}

TEST_CASE("suffix law for G", "[ltl]") {
  std::mt19937 rng(11);
  for (int i = 0; i < 300; ++i) {
    Formula f = random_formula(rng, kLetters, 3);
    Trace u = random_trace(rng, kLetters, 4);
    bool all = true;
    for (size_t k = 0; k < u.positions(); ++k) all = all && holds_on_trace(suffix(u, k), f);
    CHECK(holds_on_trace(u, Formula::globally(f)) == all);
    auto cols = evaluate_positions(u, f);
    for (size_t k = 0; k < u.positions(); ++k) CHECK(cols[k] == holds_on_trace(suffix(u, k), f));
  }
}

TEST_CASE("counterexamples are real traces that refute the formula", "[ltl]") {
  std::mt19937 rng(3);
  size_t refuted = 0;
  for (int i = 0; i < 300; ++i) {
    auto g = random_graph(rng, kLetters, 20);
    Formula f = random_formula(rng, kLetters, 4);
    auto v = model_check(g, f);
    if (v.holds) continue;
    ++refuted;
    REQUIRE(v.counterexample);
    CHECK_FALSE(holds_on_trace(*v.counterexample, f));
    CHECK(oracle::is_trace_of(g, *v.counterexample));
  }
  CHECK(refuted > 50);
}

TEST_CASE("model checking is deterministic", "[ltl]") {
  auto a = model_check(vm_graph(1), prop("phi6"));
  auto b = model_check(vm_graph(1), prop("phi6"));
  REQUIRE(a.counterexample);
  REQUIRE(b.counterexample);
  CHECK(*a.counterexample == *b.counterexample);
}
