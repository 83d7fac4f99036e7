#include <catch_amalgamated.hpp>

#include "ebltl/ebltl.hpp"
#include "support.hpp"

using namespace ebltl;
using report::Json;

namespace {

std::vector<std::string> keys(const Json& j) {
  std::vector<std::string> out;
  for (auto it = j.begin(); it != j.end(); ++it) out.push_back(it.key());
  return out;
}

std::string certificates() {
  auto c = refine::load_chain(corpus("vm/chain.json"));
  preserve::ChainContext ctx(c);
  Json all = Json::array();
  all.push_back(report::certificate_json(preserve::apply_lemma_gf(ctx)));
  for (auto p : {"phi2", "phi3", "phi4"})
    all.push_back(report::certificate_json(
        preserve::apply_preservation(ctx, 0, parse_formula(c.properties.at(p)))));
  return report::dump(all);
}

}  // namespace

TEST_CASE("envelope layout", "[report]") {
  auto j = report::envelope("mc", "pass", Json::object());
  CHECK(keys(j) == std::vector<std::string>{"tool", "schema", "command", "outcome", "result"});
  CHECK(j["schema"] == report::kSchemaVersion);
  CHECK(report::dump(j).back() == '\n');
}

TEST_CASE("trace documents", "[report]") {
  auto j = report::trace_json(ltl::Trace::lasso({"a"}, {"b", "c"}));
  CHECK(j["kind"] == "lasso");
  CHECK(j["prefix"] == Json::array({"a"}));
  CHECK(j["cycle"] == Json::array({"b", "c"}));
  CHECK(j["text"] == ltl::to_string(ltl::Trace::lasso({"a"}, {"b", "c"})));
  CHECK(report::trace_json(ltl::Trace::finite({}))["kind"] == "finite");
  CHECK(report::optional_trace(std::nullopt).is_null());
}

TEST_CASE("certificate documents", "[report]") {
  auto c = refine::load_chain(corpus("vm/chain.json"));
  preserve::ChainContext ctx(c);
  auto j = report::certificate_json(
      preserve::apply_preservation(ctx, 0, parse_formula(c.properties.at("phi4"))));
  CHECK(j["lemma"] == 2);
  CHECK(j["asserted"] == false);
  CHECK(j["consistent"] == true);
  bool sat_failed = false;
  for (const auto& h : j["hypotheses"])
    if (h["id"] == "sat") sat_failed = h["holds"] == false;
  CHECK(sat_failed);
  CHECK(j["dependence"]["status"] == "certified");
}

TEST_CASE("renaming documents list new events", "[report]") {
  auto c = refine::load_chain(corpus("vm/chain-vm0.json"));
  auto j = report::renaming_json(refine::compose_renamings(c, 1));
  CHECK(j["forward"]["selectChoc"] == "selectItem");
  CHECK(j["new_events"] == Json::array({"pay", "refill", "refund"}));
}

TEST_CASE("equal inputs serialize to equal bytes", "[report]") {
  CHECK(certificates() == certificates());
  auto m = dsl::load_machine(corpus("vm/vm2.eb"));
  CHECK(report::dump(report::graph_json(sem::explore(m))) ==
        report::dump(report::graph_json(sem::explore(m))));
  oracle::DiffOptions opt;
  opt.random_pairs = 40;
  auto entries = oracle::load_corpus(corpus(""));
  CHECK(report::dump(report::diff_json(oracle::cross_validate(entries, opt))) ==
        report::dump(report::diff_json(oracle::cross_validate(entries, opt))));
}
