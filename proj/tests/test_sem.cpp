#include <catch_amalgamated.hpp>

#include <set>

#include "ebltl/dsl/machine.hpp"
#include "ebltl/report.hpp"
#include "ebltl/sem/explore.hpp"
#include "support.hpp"

using namespace ebltl;
using namespace ebltl::sem;

namespace {

std::set<std::string> state_texts(const StateGraph& g) {
  std::set<std::string> out;
  for (size_t s = 0; s < g.states.size(); ++s) out.insert(g.state_text(s));
  return out;
}

}  // namespace

TEST_CASE("VM1 has four states and eight edges", "[sem]") {
  auto g = explore(dsl::load_machine(corpus("vm/vm1.eb")));
  CHECK(g.states.size() == 4);
  CHECK(g.edges.size() == 8);
  CHECK(g.deadlocks.empty());
  CHECK(state_texts(g) == std::set<std::string>{"chosen={}", "chosen={biscuit}", "chosen={choc}",
                                                "chosen={biscuit, choc}"});
  CHECK(check_invariant(g).holds);
  CHECK(check_deadlock_free(g).holds);
}

TEST_CASE("VM0 with item in 0..3 has four states and six edges", "[sem]") {
  auto g = explore(dsl::load_machine(corpus("vm/vm0.eb")));
  CHECK(g.states.size() == 4);
  CHECK(g.edges.size() == 6);
  CHECK(g.deadlocks.empty());
  size_t sel = 0, disp = 0;
  for (const auto& e : g.edges) (e.event == "selectItem" ? sel : disp)++;
  CHECK(sel == 3);
  CHECK(disp == 3);
}

TEST_CASE("init violating the invariant fails at depth 0", "[sem]") {
  auto m = dsl::parse_machine(R"(
machine Bad
variables x : 0..3
invariant x > 0
events
  init then x := 0 end
end)");
  try {
    explore(m);
    FAIL("expected an invariant violation");
  } catch (const ExplorationError& e) {
    CHECK(e.depth() == 0);
    CHECK_THAT(std::string(e.what()), Catch::Matchers::ContainsSubstring("invariant"));
  }
}

TEST_CASE("successor violating the invariant reports its path", "[sem]") {
  auto m = dsl::parse_machine(R"(
machine Bad
variables x : 0..3
invariant x < 2
events
  init then x := 0 end
  inc status ordinary when x < 3 then x := x + 1 end
end)");
  try {
    explore(m);
    FAIL("expected an invariant violation");
  } catch (const ExplorationError& e) {
    CHECK(e.path() == std::vector<std::string>{"inc", "inc"});
  }
}

TEST_CASE("state limit is enforced", "[sem]") {
  auto m = dsl::load_machine(corpus("vm/vm4.eb"));
  CHECK_THROWS_AS(explore(m, Limits{10}), LimitError);
}

TEST_CASE("VM2 and VM4 invariants hold and VM4 is deadlock free", "[sem]") {
  auto g2 = explore(dsl::load_machine(corpus("vm/vm2.eb")));
  CHECK(check_invariant(g2).holds);
  auto g4 = explore(dsl::load_machine(corpus("vm/vm4.eb")));
  CHECK(check_invariant(g4).holds);
  CHECK(check_deadlock_free(g4).holds);
}

TEST_CASE("hand-built state with negative credit violates the invariant", "[sem]") {
  auto m = dsl::load_machine(corpus("vm/vm2.eb"));
  StateGraph g;
  g.machine = std::make_shared<const dsl::MachineAST>(m);
  State s(m.variables.size(), 0);
  s[m.variable_index("credit")] = -1;
  g.initial.push_back(g.add_state(s));
  g.finish();
  auto v = check_invariant(g);
  CHECK_FALSE(v.holds);
  REQUIRE(v.state);
  CHECK(*v.state == 0);
}

TEST_CASE("single event guarded false deadlocks at the initial state", "[sem]") {
  auto m = dsl::parse_machine(R"(
machine Stuck
variables flag : bool
events
  init then flag := FALSE end
  never status ordinary when FALSE then flag := TRUE end
end)");
  auto g = explore(m);
  auto v = check_deadlock_free(g);
  CHECK_FALSE(v.holds);
  REQUIRE(v.state);
  CHECK(g.is_initial(*v.state));
  CHECK(v.path.empty());
}

TEST_CASE("nondeterministic pay yields one edge per amount", "[sem]") {
  auto g = explore(dsl::load_machine(corpus("vm/vm2.eb")));
  size_t from_init = 0;
  for (size_t e : g.out[g.initial.at(0)])
    if (g.edges[e].event == "pay") ++from_init;
  CHECK(from_init == 3);
}

TEST_CASE("edges are sound and complete", "[sem]") {
  for (auto f : {"vm/vm1.eb", "vm/vm2.eb", "vm/vm3.eb", "vm/vm4.eb", "lift/lift_doors.eb"}) {
    auto m = dsl::load_machine(corpus(f));
    auto g = explore(m);
    std::map<State, size_t> index;
    for (size_t s = 0; s < g.states.size(); ++s) index[g.states[s]] = s;
    for (size_t s = 0; s < g.states.size(); ++s) {
      std::set<std::pair<std::string, size_t>> expected, actual;
      for (const auto& e : m.events)
        for (const auto& fire : successors(m, e, g.states[s])) {
          REQUIRE(index.count(fire.target));
          expected.insert({e.name, index[fire.target]});
        }
      for (size_t ei : g.out[s]) actual.insert({g.edges[ei].event, g.edges[ei].target});
      CHECK(expected == actual);
      CHECK(g.out[s].empty() ==
            std::binary_search(g.deadlocks.begin(), g.deadlocks.end(), s));
    }
  }
}

TEST_CASE("exploration is deterministic", "[sem]") {
  auto m = dsl::load_machine(corpus("vm/vm4.eb"));
  auto a = report::dump(report::graph_json(explore(m)));
  auto b = report::dump(report::graph_json(explore(m)));
  CHECK(a == b);
}
