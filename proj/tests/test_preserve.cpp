#include <catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "ebltl/ltl/evaluate.hpp"
#include "ebltl/preserve/beta.hpp"
#include "ebltl/preserve/lemma.hpp"
#include "ebltl/preserve/translate.hpp"
#include "ebltl/refine/chain.hpp"
#include "support.hpp"

using namespace ebltl;
using namespace ebltl::preserve;
using ltl::Trace;
using Status = DependenceVerdict::Status;

namespace {

const refine::RefinementChain& chain(const std::string& file) {
  static std::map<std::string, refine::RefinementChain> cache;
  auto it = cache.find(file);
  if (it == cache.end()) it = cache.emplace(file, refine::load_chain(corpus("vm/" + file))).first;
  return it->second;
}

Formula prop(const std::string& file, const std::string& name) {
  return parse_formula(chain(file).properties.at(name));
}

const Formula kGfInitial = parse_formula(
    "G F ([dispenseBiscuit] | [dispenseChoc] | [selectBiscuit] | [selectChoc])");

const Hypothesis& hypothesis(const Certificate& c, const std::string& id) {
  for (const auto& h : c.hypotheses)
    if (h.id == id) return h;
  throw std::runtime_error("no hypothesis " + id);
}

const std::vector<std::string> kAbstract{"x", "y", "z"};
const std::vector<std::string> kConcrete{"a", "b", "c", "d", "e"};

RenamingMap random_renaming(std::mt19937& rng) {
  return oracle::random_renaming(rng, kConcrete, kAbstract);
}

}  // namespace

TEST_CASE("translation splits atoms into sorted disjunctions", "[preserve]") {
  const auto& c = chain("chain-vm0.json");
  auto g = refine::compose_renamings(c, 1);
  CHECK(translate_formula(prop("chain-vm0.json", "item"), g) ==
        parse_formula("G(([selectBiscuit] | [selectChoc]) => F([dispenseBiscuit] | [dispenseChoc]))"));
  Formula phi = prop("chain.json", "phi2");
  CHECK(translate_formula(phi, refine::RenamingMap::identity(refine::alphabet_of(c.machines[1]))) ==
        phi);
  CHECK(translate_formula(parse_formula("[z]"), g) == Formula::falsity());
}

TEST_CASE("completing a renaming adds identities on new events", "[preserve]") {
  const auto& c = chain("chain-vm0.json");
  auto f2 = refine::compose_renamings(c, 1, 2);  // VM2 events back to VM0
  auto tot = complete_renaming(f2);
  CHECK(tot.apply("pay") == "pay");
  CHECK(tot.apply("refund") == "refund");
  CHECK(tot.apply("selectBiscuit") == "selectItem");
  CHECK(tot.domain() == tot.concrete_alphabet);
  EventSet range = f2.abstract_alphabet;
  range.insert({"pay", "refund"});
  CHECK(tot.range() == range);

  auto total = refine::RenamingMap::identity({"p", "q"});
  CHECK(complete_renaming(total) == total);
  refine::RenamingMap empty;
  empty.concrete_alphabet = {"p", "q"};
  CHECK(complete_renaming(empty).forward ==
        std::map<std::string, std::string>{{"p", "p"}, {"q", "q"}});
}

TEST_CASE("traces map pointwise", "[preserve]") {
  const auto& c = chain("chain-vm0.json");
  auto g = complete_renaming(refine::compose_renamings(c, 1));
  CHECK(map_trace(g, Trace::lasso({"selectBiscuit"}, {"dispenseBiscuit", "selectBiscuit"})) ==
        Trace::lasso({"selectItem"}, {"dispenseItem", "selectItem"}));
  Trace u = Trace::lasso({"a"}, {"b"});
  CHECK(map_trace(refine::RenamingMap::identity({"a", "b"}), u) == u);
  CHECK_THROWS_AS(map_trace(refine::compose_renamings(c, 1), Trace::finite({"pay"})), Error);
}

TEST_CASE("beta-dependence examples", "[preserve]") {
  auto gf = check_beta_dependent(parse_formula("G F [pay]"), {"pay"}, {"pay", "refill"});
  CHECK(gf.status == Status::Certified);
  CHECK(gf.method == "syntactic-schema");

  Formula ng = parse_formula("!G [pay]");
  auto v = check_beta_dependent(ng, {"pay"}, {"pay", "refill"});
  REQUIRE(v.status == Status::Refuted);
  REQUIRE(v.witness);
  CHECK(ltl::same_word(ltl::project_trace(*v.witness, {"pay"}),
                       ltl::project_trace(Trace::lasso({"pay", "refill"}, {"pay"}), {"pay"})));
  CHECK(ltl::holds_on_trace(*v.witness, ng) !=
        ltl::holds_on_trace(ltl::project_trace(*v.witness, {"pay"}), ng));

  auto vm4 = refine::alphabet_of(chain("chain.json").final_machine());
  EventSet o0{"selectBiscuit", "selectChoc", "dispenseBiscuit", "dispenseChoc"};
  Formula g = parse_formula("G([selectBiscuit] | [selectChoc] | [dispenseBiscuit] | [dispenseChoc])");
  auto w = check_beta_dependent(g, o0, vm4);
  REQUIRE(w.status == Status::Refuted);
  CHECK_FALSE(ltl::events_of(*w.witness).empty());
  bool outside = false;
  for (const auto& e : ltl::events_of(*w.witness)) outside = outside || !o0.count(e);
  CHECK(outside);

  CHECK_THROWS_AS(check_beta_dependent(parse_formula("F [pay]"), {"refill"}, {"pay"}), Error);
}

TEST_CASE("unrefuted non-schema formulas stay unknown", "[preserve]") {
  Formula phi = parse_formula("F([a] & F [b])");
  REQUIRE_FALSE(preserve::detail::projection_schema(phi));
  auto v = check_beta_dependent(phi, {"a", "b"}, {"a", "b", "c"}, {2, 2});
  CHECK(v.status == Status::Unknown);
  CHECK(v.traces_checked > 0);
}

TEST_CASE("Lemma 1 on VM1..VM4", "[preserve]") {
  ChainContext ctx(chain("chain.json"));
  auto cert = apply_lemma_gf(ctx);
  CHECK(cert.lemma == 1);
  CHECK(cert.asserted);
  CHECK(cert.conclusion == kGfInitial);
  CHECK(cert.cross.ran);
  CHECK(cert.cross.holds);
}

TEST_CASE("Lemma 3 on VM0..VM4", "[preserve]") {
  ChainContext ctx(chain("chain-vm0.json"));
  auto cert = apply_lemma_gf(ctx);
  CHECK(cert.lemma == 3);
  CHECK(cert.asserted);
  CHECK(cert.conclusion == kGfInitial);
  CHECK(cert.cross.holds);
}

TEST_CASE("Lemma 1 on the chain truncated at VM3 is blocked", "[preserve]") {
  ChainContext ctx(chain("chain-to-vm3.json"));
  auto cert = apply_lemma_gf(ctx);
  CHECK_FALSE(cert.asserted);
  const auto& h = hypothesis(cert, "anticipated");
  CHECK_FALSE(h.holds);
  CHECK_THAT(h.evidence, Catch::Matchers::ContainsSubstring("pay"));
  CHECK(cert.consistent());
}

TEST_CASE("Lemma 2 carries phi1-phi3 from VM1 and phi7 from VM2", "[preserve]") {
  ChainContext ctx(chain("chain.json"));
  for (auto [level, name] : std::vector<std::pair<size_t, std::string>>{
           {0, "phi1"}, {0, "phi2"}, {0, "phi3"}, {1, "phi7"}}) {
    INFO(name);
    Formula phi = prop("chain.json", name);
    auto cert = apply_preservation(ctx, level, phi);
    CHECK(cert.lemma == 2);
    CHECK(cert.asserted);
    CHECK(cert.conclusion == phi);
    CHECK(cert.cross.holds);
  }
}

TEST_CASE("Lemma 2 at phi4 is blocked on the satisfaction hypothesis", "[preserve]") {
  ChainContext ctx(chain("chain.json"));
  auto cert = apply_preservation(ctx, 0, prop("chain.json", "phi4"));
  CHECK_FALSE(cert.asserted);
  CHECK(cert.failed() == std::vector<std::string>{"VM1 |= phi"});
  const auto& sat = hypothesis(cert, "sat");
  CHECK_FALSE(sat.holds);
  CHECK_THAT(sat.evidence, Catch::Matchers::ContainsSubstring("dispenseBiscuit, selectBiscuit)^ω"));
}

TEST_CASE("Lemma 4 carries the VM0 property through the splitting", "[preserve]") {
  ChainContext ctx(chain("chain-vm0.json"));
  auto cert = apply_preservation(ctx, 0, prop("chain-vm0.json", "item"));
  CHECK(cert.lemma == 4);
  CHECK(cert.asserted);
  CHECK(cert.conclusion ==
        parse_formula("G(([selectBiscuit] | [selectChoc]) => F([dispenseBiscuit] | [dispenseChoc]))"));
  CHECK(cert.cross.holds);
}

TEST_CASE("preservation rejects bad levels and betas", "[preserve]") {
  ChainContext ctx(chain("chain.json"));
  CHECK_THROWS_AS(apply_preservation(ctx, 3, prop("chain.json", "phi7")), Error);
  CHECK_THROWS_AS(apply_preservation(ctx, 0, prop("chain.json", "phi2"), {"selectChoc"}), Error);
  auto cert = apply_preservation(ctx, 0, prop("chain.json", "phi4"),
                                 {"selectChoc", "dispenseChoc", "pay"});
  CHECK_FALSE(hypothesis(cert, "beta-alphabet").holds);
}

TEST_CASE("every asserted conclusion on the corpus is confirmed", "[preserve]") {
  for (auto f : {"chain.json", "chain-vm0.json"}) {
    const auto& c = chain(f);
    ChainContext ctx(c);
    CHECK(apply_lemma_gf(ctx).consistent());
    for (size_t i = 0; i < c.n(); ++i)
      for (const auto& [name, text] : c.properties) {
        Formula phi = parse_formula(text);
        auto alpha = refine::alphabet_of(c.machines[i]);
        bool fits = true;
        for (const auto& a : alphabet(phi)) fits = fits && alpha.count(a);
        if (!fits) continue;
        INFO(f << " level " << i << " " << name);
        auto cert = apply_preservation(ctx, i, phi);
        CHECK(cert.consistent());
      }
  }
}

TEST_CASE("Lemma 5: translating under h and h_tot agree", "[preserve]") {
  std::mt19937 rng(5);
  for (int i = 0; i < 500; ++i) {
    auto h = random_renaming(rng);
    Formula phi = random_formula(rng, kAbstract, 4);
    CHECK(translate_formula(phi, h) == translate_formula(phi, complete_renaming(h)));
  }
}

TEST_CASE("Lemma 6: translation matches the mapped trace", "[preserve]") {
  std::mt19937 rng(6);
  size_t failures = 0;
  for (int i = 0; i < 1000; ++i) {
    auto h = random_renaming(rng);
    auto dom = h.domain();
    std::vector<std::string> letters(dom.begin(), dom.end());
    Formula phi = random_formula(rng, kAbstract, 4);
    Trace u = random_trace(rng, letters, 4);
    bool lhs = ltl::holds_on_trace(u, translate_formula(phi, h));
    bool rhs = ltl::holds_on_trace(map_trace(h, u), phi);
    if (lhs != rhs) {
      ++failures;
      UNSCOPED_INFO(to_string(phi) << " on " << ltl::to_string(u));
    }
  }
  CHECK(failures == 0);
}

TEST_CASE("Lemma 7: translated schema formulas resist the bounded refuter", "[preserve]") {
  std::mt19937 rng(8);
  for (int i = 0; i < 60; ++i) {
    auto h = random_renaming(rng);
    Formula phi = oracle::random_schema_formula(rng, kAbstract, 2);
    EventSet beta = alphabet(phi);
    if (rng() % 2) beta.insert(kAbstract[rng() % kAbstract.size()]);
    REQUIRE(check_beta_dependent(phi, beta, {kAbstract.begin(), kAbstract.end()}).status ==
            Status::Certified);
    Formula t = translate_formula(phi, h);
    EventSet pre = h.preimage(beta);
    auto v = search_projection_witness(t, pre, h.concrete_alphabet, {2, 2});
    INFO(to_string(t) << " beta' = " << pre.size() << " events");
    CHECK(v.status != Status::Refuted);
  }
}

TEST_CASE("certificates are deterministic", "[preserve]") {
  ChainContext a(chain("chain.json")), b(chain("chain.json"));
  auto x = apply_preservation(a, 0, prop("chain.json", "phi2"));
  auto y = apply_preservation(b, 0, prop("chain.json", "phi2"));
  CHECK(x.conclusion == y.conclusion);
  REQUIRE(x.hypotheses.size() == y.hypotheses.size());
  for (size_t i = 0; i < x.hypotheses.size(); ++i)
    CHECK(x.hypotheses[i].evidence == y.hypotheses[i].evidence);
}
