#include <catch_amalgamated.hpp>

#include <json.hpp>
#include <set>

#include "ebltl/dsl/machine.hpp"
#include "ebltl/refine/ca.hpp"
#include "ebltl/refine/chain.hpp"
#include "ebltl/refine/po.hpp"
#include "ebltl/refine/strategy.hpp"
#include "ebltl/sem/explore.hpp"
#include "support.hpp"

using namespace ebltl;
using namespace ebltl::refine;

namespace {

const RefinementChain& chain(const std::string& file) {
  static std::map<std::string, RefinementChain> cache;
  auto it = cache.find(file);
  if (it == cache.end()) it = cache.emplace(file, load_chain(corpus("vm/" + file))).first;
  return it->second;
}

nlohmann::json expected() { return nlohmann::json::parse(dsl::read_text_file(corpus("vm/expected.json"))); }

/// States of g reachable by following the event path from an initial state.
std::set<size_t> replay(const sem::StateGraph& g, const std::vector<std::string>& path) {
  std::set<size_t> cur(g.initial.begin(), g.initial.end());
  for (const auto& step : path) {
    std::set<size_t> next;
    for (size_t s : cur)
      for (size_t e : g.out[s])
        if (g.edges[e].event == step) next.insert(g.edges[e].target);
    cur = std::move(next);
  }
  return cur;
}

std::set<std::string> failing(const std::vector<POReport>& reps) {
  std::set<std::string> out;
  for (const auto& r : reps)
    for (const auto& o : r.obligations)
      if (!o.holds) out.insert(r.abstract_name + "->" + r.concrete_name + ":" + o.name);
  return out;
}

std::vector<POReport> all_pos(const RefinementChain& c) {
  std::vector<POReport> out;
  for (size_t j = 1; j <= c.n(); ++j)
    out.push_back(check_refinement_pair(c.machines[j - 1], c.machines[j], c.links[j - 1]));
  return out;
}

}  // namespace

TEST_CASE("every adjacent VM pair satisfies the four obligations", "[refine]") {
  for (auto f : {"chain.json", "chain-vm0.json"}) {
    const auto& c = chain(f);
    for (const auto& r : all_pos(c)) {
      INFO(r.abstract_name << " -> " << r.concrete_name);
      CHECK(r.all_hold());
      CHECK(r.obligations.size() == 4);
      CHECK(r.pairs > 0);
    }
  }
}

TEST_CASE("identity refinement passes", "[refine]") {
  for (auto f : {"vm/vm1.eb", "vm/vm0.eb", "lift/lift.eb"}) {
    auto m = dsl::load_machine(corpus(f));
    auto c = make_chain({m, m});
    CHECK(c.f(1).is_identity());
    CHECK(check_refinement_pair(c.machines[0], c.machines[1], c.links[0]).all_hold());
  }
}

TEST_CASE("mutants fail exactly the intended obligation or rule", "[refine]") {
  auto exp = expected();
  for (auto& [name, m] : exp["mutants"].items()) {
    INFO(name);
    auto c = load_chain(corpus("vm/" + m["manifest"].get<std::string>()));
    auto want_pos = m["failing_pos"].get<std::set<std::string>>();
    auto want_rules = m["failing_rules"].get<std::set<int>>();
    CHECK(failing(all_pos(c)) == want_pos);
    CHECK(check_strategy(c).violated_rules() == want_rules);
  }
}

TEST_CASE("GRD_REF witness replays to a state where the abstract guard is false", "[refine]") {
  auto c = load_chain(corpus("vm/mutants/vm2_selectbiscuit_guard.json"));
  auto r = check_refinement_pair(c.machines[0], c.machines[1], c.links[0]);
  const auto& grd = r.get("GRD_REF");
  REQUIRE_FALSE(grd.holds);
  CHECK_THAT(grd.witness, Catch::Matchers::ContainsSubstring("selectBiscuit"));
  const auto& conc = c.machines[1];
  auto g = sem::explore(conc);
  auto states = replay(g, grd.path);
  REQUIRE_FALSE(states.empty());
  int chosen = conc.variable_index("chosen");
  int biscuit_bit = 2;  // ITEM = {choc, biscuit}
  bool found = false;
  for (size_t s : states)
    found = found || (sem::enabled(conc, conc.events[conc.event_index("selectBiscuit")], g.states[s]) &&
                      (g.states[s][chosen] & biscuit_bit));
  CHECK(found);
}

TEST_CASE("WFD_REF witness replays to a variant increase", "[refine]") {
  auto c = load_chain(corpus("vm/mutants/vm2_variant_inverted.json"));
  auto r = check_refinement_pair(c.machines[0], c.machines[1], c.links[0]);
  const auto& wfd = r.get("WFD_REF");
  REQUIRE_FALSE(wfd.holds);
  const auto& conc = c.machines[1];
  auto g = sem::explore(conc);
  auto states = replay(g, wfd.path);
  REQUIRE_FALSE(states.empty());
  auto variant = [&](const sem::State& s) { return sem::eval(*conc.variant, sem::Env{&s}); };
  bool found = false;
  for (size_t s : states)
    for (size_t e : g.out[s]) {
      const auto& ev = conc.events[conc.event_index(g.edges[e].event)];
      auto before = variant(g.states[s]), after = variant(g.states[g.edges[e].target]);
      if (ev.status == dsl::Status::Anticipated && after > before) found = true;
      if (ev.status == dsl::Status::Convergent && after >= before) found = true;
    }
  CHECK(found);
}

TEST_CASE("variant decreases on convergent edges of the VM machines", "[refine]") {
  const auto& c = chain("chain.json");
  for (size_t i = 1; i <= c.n(); ++i) {
    const auto& m = c.machines[i];
    auto g = sem::explore(m);
    for (const auto& ed : g.edges) {
      const auto& ev = m.events[m.event_index(ed.event)];
      auto before = sem::eval(*m.variant, sem::Env{&g.states[ed.source]});
      auto after = sem::eval(*m.variant, sem::Env{&g.states[ed.target]});
      CHECK(before >= 0);
      if (ev.status == dsl::Status::Convergent) CHECK(after < before);
      if (ev.status == dsl::Status::Anticipated) CHECK(after <= before);
    }
  }
}

TEST_CASE("strategy labels of the VM chain", "[refine]") {
  auto r = check_strategy(chain("chain.json"));
  CHECK(r.holds());
  REQUIRE(r.labels.size() == 4);
  CHECK(r.labels[0].convergent.empty());
  CHECK(r.labels[1].convergent == EventSet{"refund"});
  CHECK(r.labels[2].convergent == EventSet{"refill"});
  CHECK(r.labels[3].convergent == EventSet{"pay"});
  CHECK(r.labels[3].anticipated.empty());
}

TEST_CASE("chain truncated at VM3 violates exactly rule 6 for pay", "[refine]") {
  auto r = check_strategy(chain("chain-to-vm3.json"));
  CHECK(r.violated_rules() == std::set<int>{6});
  REQUIRE(r.findings.size() == 1);
  CHECK(r.findings[0].event == "pay");
}

TEST_CASE("single ordinary machine is a valid chain", "[refine]") {
  auto c = make_chain({dsl::load_machine(corpus("vm/vm1.eb"))});
  CHECK(check_strategy(c).holds());
  CHECK(c.n() == 0);
}

TEST_CASE("g_{1,4} on the VM0 chain", "[refine]") {
  const auto& c = chain("chain-vm0.json");
  auto g = compose_renamings(c, 1);
  CHECK(g.apply("selectBiscuit") == "selectItem");
  CHECK(g.apply("selectChoc") == "selectItem");
  CHECK(g.apply("dispenseBiscuit") == "dispenseItem");
  CHECK(g.apply("dispenseChoc") == "dispenseItem");
  for (auto e : {"pay", "refund", "refill"}) CHECK_FALSE(g.defined(e));
  CHECK(compose_renamings(c, c.n() + 1).is_identity());
  CHECK_THROWS(compose_renamings(c, 0));
  CHECK_THROWS(compose_renamings(c, c.n() + 2));
}

TEST_CASE("renaming composition is associative at every split point", "[refine]") {
  for (auto f : {"chain.json", "chain-vm0.json"}) {
    const auto& c = chain(f);
    size_t n = c.n();
    for (size_t i = 1; i <= n + 1; ++i)
      for (size_t j = i; j <= n + 1; ++j)
        CHECK(then(compose_renamings(c, j, n), compose_renamings(c, i, j - 1)) ==
              compose_renamings(c, i, n));
  }
}

TEST_CASE("CA on toy graphs", "[refine]") {
  sem::StateGraph g;
  g.add_state({0});
  g.add_state({1});
  g.initial = {0};
  g.add_edge(0, "o", 1);
  g.add_edge(1, "c", 1);
  g.finish();
  CHECK(check_ca(g, {}, {"o"}).holds);
  auto v = check_ca(g, {"c"}, {"o"});
  CHECK_FALSE(v.holds);
  REQUIRE(v.witness);
  CHECK(v.witness->cycle == std::vector<std::string>{"c"});
  CHECK(v.witness->prefix == std::vector<std::string>{"o"});
}

TEST_CASE("Theorem 1 on the VM chains", "[refine]") {
  for (auto f : {"chain.json", "chain-vm0.json"}) {
    const auto& c = chain(f);
    auto gn = sem::explore(c.final_machine());
    auto r = check_theorem1(c, gn);
    CHECK(r.c_star == EventSet{"refund", "refill", "pay"});
    CHECK(r.o_star == EventSet{"selectBiscuit", "selectChoc", "dispenseBiscuit", "dispenseChoc"});
    CHECK(r.asserted);
    CHECK(r.direct.holds);
    CHECK(r.consistent());
  }
}

TEST_CASE("Theorem 1 on a one-machine chain is vacuous", "[refine]") {
  auto c = make_chain({dsl::load_machine(corpus("vm/vm1.eb"))});
  auto r = check_theorem1(c, sem::explore(c.machines[0]));
  CHECK(r.c_star.empty());
  CHECK(r.holds());
}

TEST_CASE("divergent mutant fails CA with a pay/refund loop", "[refine]") {
  auto c = load_chain(corpus("vm/mutants/vm4_divergent.json"));
  auto gn = sem::explore(c.final_machine());
  auto r = check_theorem1(c, gn);
  CHECK_FALSE(r.direct.holds);
  REQUIRE(r.direct.witness);
  for (const auto& e : r.direct.witness->cycle) CHECK_FALSE(r.o_star.count(e));
  EventSet cyc(r.direct.witness->cycle.begin(), r.direct.witness->cycle.end());
  CHECK(cyc == EventSet{"pay", "refund"});
  // The theorem does not assert CA here, so the two levels stay consistent.
  CHECK_FALSE(r.asserted);
  CHECK(r.consistent());
}

TEST_CASE("Theorem 1 and the direct check agree across the mutation suite", "[refine]") {
  auto exp = expected();
  for (auto& [name, m] : exp["mutants"].items()) {
    INFO(name);
    auto c = load_chain(corpus("vm/" + m["manifest"].get<std::string>()));
    auto r = check_theorem1(c, sem::explore(c.final_machine()));
    CHECK(r.consistent());
  }
}
