#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ebltl/error.hpp"
#include "ebltl/formula.hpp"
#include "ebltl/ltl/model_check.hpp"
#include "ebltl/preserve/beta.hpp"
#include "ebltl/preserve/translate.hpp"
#include "ebltl/refine/ca.hpp"
#include "ebltl/refine/chain.hpp"
#include "ebltl/refine/po.hpp"
#include "ebltl/refine/strategy.hpp"
#include "ebltl/sem/explore.hpp"

namespace ebltl::preserve {

/// A chain with lazily computed graphs and pair reports, shared by the
/// lemma engines and the CLI.
class ChainContext {
 public:
  explicit ChainContext(const refine::RefinementChain& chain, sem::Limits limits = {})
      : chain_(chain), limits_(limits) {}

  const refine::RefinementChain& chain() const { return chain_; }
  const sem::Limits& limits() const { return limits_; }

  const sem::StateGraph& graph(size_t i) {
    auto it = graphs_.find(i);
    if (it == graphs_.end()) it = graphs_.emplace(i, sem::explore(chain_.machines.at(i), limits_)).first;
    return it->second;
  }
  /// Pair report for step j (M_{j-1} to M_j), 1 <= j <= n.
  const refine::POReport& po(size_t j) {
    auto it = pos_.find(j);
    if (it == pos_.end())
      it = pos_.emplace(j, refine::check_refinement_pair(chain_.machines.at(j - 1),
                                                         chain_.machines.at(j),
                                                         chain_.links.at(j - 1), limits_))
               .first;
    return it->second;
  }
  const refine::StrategyReport& strategy() {
    if (!strategy_) strategy_ = refine::check_strategy(chain_);
    return *strategy_;
  }

 private:
  const refine::RefinementChain& chain_;
  sem::Limits limits_;
  std::map<size_t, sem::StateGraph> graphs_;
  std::map<size_t, refine::POReport> pos_;
  std::optional<refine::StrategyReport> strategy_;
};

struct Hypothesis {
  std::string id;  // stable key: sat, po, strategy, deadlock, anticipated, beta-alphabet, beta-dependent
  std::string name;
  bool holds = false;
  std::string evidence;
};

struct CrossValidation {
  bool ran = false;
  bool holds = false;
  std::optional<ltl::Trace> counterexample;
};

struct Certificate {
  int lemma = 0;  // 1, 2, 3 or 4
  std::string chain;
  std::vector<std::string> machines;
  size_t level = 0;  // i: the machine the property was checked on
  size_t max_states = 0;
  std::map<std::string, std::int64_t> constants;
  std::optional<Formula> property;  // φ at level i (lemmas 2 and 4)
  EventSet beta;
  std::optional<DependenceVerdict> dependence;
  std::vector<Hypothesis> hypotheses;
  Formula conclusion = Formula::truth();  // asserted of M_n when every hypothesis holds
  bool asserted = false;
  CrossValidation cross;

  /// False only when an asserted conclusion is contradicted on M_n.
  bool consistent() const { return !asserted || !cross.ran || cross.holds; }
  std::vector<std::string> failed() const {
    std::vector<std::string> out;
    for (const auto& h : hypotheses)
      if (!h.holds) out.push_back(h.name);
    return out;
  }
};

struct LemmaOptions {
  bool cross_validate = true;
  bool accept_unknown_dependence = false;
  BetaBounds bounds;
};

namespace detail {

inline std::string join(const std::vector<std::string>& v, const std::string& sep = ", ") {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
  return s;
}

inline Certificate skeleton(ChainContext& ctx, int lemma, size_t level) {
  const auto& c = ctx.chain();
  Certificate cert;
  cert.lemma = lemma;
  cert.chain = c.name;
  for (const auto& m : c.machines) cert.machines.push_back(m.name);
  cert.level = level;
  cert.max_states = ctx.limits().max_states;
  cert.constants = c.constants;
  return cert;
}

/// POs for steps from+1 .. n, strategy rules, deadlock freedom of M_n and
/// no anticipated events in M_n.
inline void chain_hypotheses(ChainContext& ctx, size_t from, Certificate& cert) {
  const auto& c = ctx.chain();
  for (size_t j = from + 1; j <= c.n(); ++j) {
    const auto& r = ctx.po(j);
    Hypothesis h{"po", "refinement " + r.abstract_name + " -> " + r.concrete_name, r.all_hold(), ""};
    for (const auto& o : r.obligations)
      if (!o.holds) h.evidence += (h.evidence.empty() ? "" : "; ") + o.name + ": " + o.witness;
    if (h.holds) h.evidence = "FIS_REF, GRD_REF, INV_REF, WFD_REF hold on " +
                              std::to_string(r.pairs) + " state pairs";
    cert.hypotheses.push_back(h);
  }
  const auto& s = ctx.strategy();
  Hypothesis st{"strategy", "strategy rules", s.holds(), ""};
  std::vector<std::string> why;
  for (const auto& f : s.findings) why.push_back("rule " + std::to_string(f.rule) + ": " + f.message);
  st.evidence = st.holds ? "rules 1-6 hold" : join(why, "; ");
  cert.hypotheses.push_back(st);

  const auto& gn = ctx.graph(c.n());
  auto dl = sem::check_deadlock_free(gn);
  Hypothesis d{"deadlock", c.final_machine().name + " deadlock free", dl.holds, ""};
  d.evidence = dl.holds ? std::to_string(gn.states.size()) + " states, no deadlock"
                        : "deadlock at [" + gn.state_text(*dl.state) + "] after " +
                              (dl.path.empty() ? std::string("<init>") : join(dl.path));
  cert.hypotheses.push_back(d);

  auto ant = refine::labels_of(c.final_machine()).anticipated;
  Hypothesis a{"anticipated", "no anticipated events in " + c.final_machine().name, ant.empty(), ""};
  a.evidence = ant.empty() ? "none" : "anticipated: " + join({ant.begin(), ant.end()});
  cert.hypotheses.push_back(a);
}

inline void finish(ChainContext& ctx, Certificate& cert, const LemmaOptions& opt) {
  cert.asserted = cert.failed().empty();
  if (!opt.cross_validate) return;
  auto v = ltl::model_check(ctx.graph(ctx.chain().n()), cert.conclusion);
  cert.cross.ran = true;
  cert.cross.holds = v.holds;
  cert.cross.counterexample = v.counterexample;
}

}  // namespace detail

/// Lemma 1 (identity renaming) or Lemma 3: M_n performs events relating to
/// the initial machine infinitely often.
inline Certificate apply_lemma_gf(ChainContext& ctx, const LemmaOptions& opt = {}) {
  const auto& c = ctx.chain();
  auto g = refine::compose_renamings(c, 1);
  Certificate cert = detail::skeleton(ctx, g.is_identity() ? 1 : 3, 0);
  detail::chain_hypotheses(ctx, 0, cert);
  auto pre = g.preimage(refine::alphabet_of(c.machines.front()));
  cert.conclusion = Formula::globally(Formula::finally(atom_disjunction({pre.begin(), pre.end()})));
  detail::finish(ctx, cert, opt);
  return cert;
}

/// Lemma 2 (identity renaming) or Lemma 4: φ verified at M_i carries over
/// to M_n as trans_{g_{i+1,n}}(φ). An empty beta defaults to α(φ).
inline Certificate apply_preservation(ChainContext& ctx, size_t i, const Formula& phi,
                                      EventSet beta = {}, const LemmaOptions& opt = {}) {
  const auto& c = ctx.chain();
  if (i >= c.n())
    throw Error("level " + std::to_string(i) + " must be below the final machine (n = " +
                std::to_string(c.n()) + ")");
  if (beta.empty()) beta = alphabet(phi);
  for (const auto& a : alphabet(phi))
    if (!beta.count(a)) throw Error("atom [" + a + "] of the property is not in beta");

  auto g = refine::compose_renamings(c, i + 1);
  Certificate cert = detail::skeleton(ctx, g.is_identity() ? 2 : 4, i);
  cert.property = phi;
  cert.beta = beta;
  const auto& mi = c.machines[i];

  auto v = ltl::model_check(ctx.graph(i), phi);
  Hypothesis sat{"sat", mi.name + " |= phi", v.holds, ""};
  sat.evidence = v.holds ? "model checked on " + std::to_string(ctx.graph(i).states.size()) +
                               " states"
                         : "counterexample " + ltl::to_string(*v.counterexample);
  cert.hypotheses.push_back(sat);

  detail::chain_hypotheses(ctx, i, cert);

  auto alpha_i = refine::alphabet_of(mi);
  std::vector<std::string> outside;
  for (const auto& b : beta)
    if (!alpha_i.count(b)) outside.push_back(b);
  cert.hypotheses.push_back({"beta-alphabet", "beta within the alphabet of " + mi.name, outside.empty(),
                             outside.empty() ? "beta = {" + detail::join({beta.begin(), beta.end()}) + "}"
                                             : "not events of " + mi.name + ": " +
                                                   detail::join(outside)});

  auto dep = check_beta_dependent(phi, beta, alpha_i, opt.bounds);
  cert.dependence = dep;
  Hypothesis d{"beta-dependent", "phi is beta-dependent", false, ""};
  switch (dep.status) {
    case DependenceVerdict::Status::Certified:
      d.holds = true;
      d.evidence = "certified by " + dep.method;
      break;
    case DependenceVerdict::Status::Refuted:
      d.evidence = "refuted by " + ltl::to_string(*dep.witness);
      break;
    case DependenceVerdict::Status::Unknown:
      d.holds = opt.accept_unknown_dependence;
      d.evidence = "no witness within prefix " + std::to_string(dep.bounds.prefix) + ", cycle " +
                   std::to_string(dep.bounds.cycle) +
                   (d.holds ? " (accepted at bounds)" : " (not accepted)");
      break;
  }
  cert.hypotheses.push_back(d);

  cert.conclusion = translate_formula(phi, g);
  detail::finish(ctx, cert, opt);
  return cert;
}

}  // namespace ebltl::preserve
