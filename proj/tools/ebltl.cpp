// ebltl: command-line front end.
//
// Exit codes: 0 pass, 1 property/obligation/rule failure, 2 lemma blocked by
// a failed hypothesis, 3 usage or parse error, 4 exploration or search bound
// exhausted.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ebltl/ebltl.hpp"

namespace fs = std::filesystem;
using namespace ebltl;
using report::Json;

namespace {

enum Exit { kPass = 0, kFail = 1, kBlocked = 2, kUsage = 3, kBound = 4 };

const char* outcome_name(int code) {
  switch (code) {
    case kPass:
      return "pass";
    case kFail:
      return "fail";
    case kBlocked:
      return "blocked";
    case kBound:
      return "bound-exhausted";
    default:
      return "error";
  }
}

struct RunConfig {
  std::string command;
  std::string machine;  // positional machine file
  std::string chain;
  std::string prop;
  std::string beta;
  std::string sigma;
  std::string at;
  std::vector<std::string> consts;
  size_t bound_states = 100000;
  size_t lasso_prefix = 4;
  size_t lasso_cycle = 4;
  bool json = false;
  bool quiet = false;
  bool edges = false;
  bool no_cross = false;
  bool accept_unknown = false;
  std::optional<size_t> step;
  std::string corpus;
  size_t random_pairs = 500;
  unsigned seed = 1;
};

class Usage : public Error {
 public:
  using Error::Error;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, sep)) {
    auto b = part.find_first_not_of(" \t");
    auto e = part.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(part.substr(b, e - b + 1));
  }
  return out;
}

fs::path corpus_root(const RunConfig& cfg) {
  if (!cfg.corpus.empty()) return cfg.corpus;
#ifdef EBLTL_DEFAULT_CORPUS
  fs::path fallback = fs::exists("corpus") ? fs::path("corpus") : fs::path(EBLTL_DEFAULT_CORPUS);
#else
  fs::path fallback = "corpus";
#endif
  return oracle::corpus_root(fallback);
}

/// Existing paths are taken as given; otherwise relative paths are tried
/// under the corpus root.
fs::path input_path(const RunConfig& cfg, const std::string& p) {
  fs::path path(p);
  if (fs::exists(path) || path.is_absolute()) return path;
  fs::path alt = corpus_root(cfg) / path;
  if (fs::exists(alt)) return alt;
  return path;
}

dsl::ConstantOverrides constants(const RunConfig& cfg) {
  dsl::ConstantOverrides out;
  for (const auto& c : cfg.consts) {
    auto eq = c.find('=');
    if (eq == std::string::npos) throw Usage("--const expects name=value, got '" + c + "'");
    try {
      out[c.substr(0, eq)] = std::stoll(c.substr(eq + 1));
    } catch (const std::exception&) {
      throw Usage("--const value for '" + c.substr(0, eq) + "' is not an integer");
    }
  }
  return out;
}

sem::Limits limits(const RunConfig& cfg) {
  if (cfg.bound_states == 0) throw Usage("--bound-states must be positive");
  return sem::Limits{cfg.bound_states};
}

preserve::BetaBounds beta_bounds(const RunConfig& cfg) {
  if (cfg.lasso_prefix == 0 || cfg.lasso_cycle == 0)
    throw Usage("--lasso-prefix and --lasso-cycle must be positive");
  return {cfg.lasso_prefix, cfg.lasso_cycle};
}

refine::RefinementChain load_chain(const RunConfig& cfg) {
  if (cfg.chain.empty()) throw Usage("--chain is required");
  auto path = input_path(cfg, cfg.chain);
  if (!fs::exists(path)) throw Usage("chain manifest not found: " + cfg.chain);
  return refine::load_chain(path, constants(cfg));
}

dsl::MachineAST load_machine(const RunConfig& cfg, const fs::path& path) {
  if (!fs::exists(path)) throw Usage("machine file not found: " + path.string());
  auto all = constants(cfg);
  dsl::ConstantOverrides mine;
  for (const auto& c : dsl::load_machine(path).constants)
    if (all.count(c.name)) mine[c.name] = all.at(c.name);
  return dsl::load_machine(path, mine);
}

/// `--at k` is the k-th machine of the manifest (1-based), or a machine name.
size_t level(const refine::RefinementChain& c, const std::string& at) {
  if (at.empty()) throw Usage("--at is required");
  for (size_t i = 0; i < c.machines.size(); ++i)
    if (c.machines[i].name == at) return i;
  size_t k = 0;
  try {
    size_t used = 0;
    k = std::stoul(at, &used);
    if (used != at.size()) throw std::invalid_argument(at);
  } catch (const std::exception&) {
    throw Usage("--at '" + at + "' is neither a position nor a machine of the chain");
  }
  if (k < 1 || k > c.machines.size())
    throw Usage("--at " + at + " is outside 1.." + std::to_string(c.machines.size()));
  return k - 1;
}

/// Named properties visible next to a machine file: from the manifests and
/// expected.json in its directory.
std::map<std::string, std::string> sibling_properties(const fs::path& machine) {
  std::map<std::string, std::string> out;
  auto dir = machine.parent_path();
  if (dir.empty()) dir = ".";
  for (auto name : {"chain.json", "expected.json"}) {
    auto f = dir / name;
    if (!fs::exists(f)) continue;
    try {
      auto j = nlohmann::json::parse(dsl::read_text_file(f));
      if (j.contains("properties"))
        for (auto& [k, v] : j["properties"].items()) out.emplace(k, v.get<std::string>());
    } catch (const nlohmann::json::exception&) {
    }
  }
  return out;
}

struct Property {
  std::string name;  // empty when given literally
  Formula formula;
};

/// `--prop` is a formula, `@file` (one formula per line, `#` comments) or a
/// property name from the manifest.
std::vector<Property> properties(const RunConfig& cfg,
                                 const std::map<std::string, std::string>& named) {
  if (cfg.prop.empty()) throw Usage("--prop is required");
  std::vector<Property> out;
  if (cfg.prop[0] == '@') {
    fs::path f = cfg.prop.substr(1);
    if (!fs::exists(f)) throw Usage("property file not found: " + f.string());
    std::istringstream in(dsl::read_text_file(f));
    std::string line;
    while (std::getline(in, line)) {
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      out.push_back({"", parse_formula(line)});
    }
    if (out.empty()) throw Usage("property file " + f.string() + " holds no formula");
    return out;
  }
  auto it = named.find(cfg.prop);
  if (it != named.end()) return {{it->first, parse_formula(it->second)}};
  return {{"", parse_formula(cfg.prop)}};
}

Property single_property(const RunConfig& cfg, const std::map<std::string, std::string>& named) {
  auto ps = properties(cfg, named);
  if (ps.size() != 1) throw Usage("this command takes exactly one property");
  return ps.front();
}

std::string label(const Property& p) {
  return p.name.empty() ? to_string(p.formula) : p.name + " = " + to_string(p.formula);
}

std::string join(const std::vector<std::string>& v, const std::string& sep = ", ") {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
  return s;
}

template <class Set>
std::string braces(const Set& s) {
  return "{" + join({s.begin(), s.end()}) + "}";
}

struct Outcome {
  int code = kPass;
  Json result;
  std::string text;
};

// ---------------------------------------------------------------- commands

Outcome cmd_parse(const RunConfig& cfg) {
  Outcome o;
  if (cfg.machine.empty()) {
    if (cfg.prop.empty()) throw Usage("give a machine file or --prop");
    Formula phi = parse_formula(cfg.prop);
    o.result = {{"formula", to_string(phi)}, {"alphabet", report::strings(alphabet(phi))}};
    o.text = to_string(phi) + "\nalphabet " + braces(alphabet(phi)) + "\n";
    return o;
  }
  auto m = load_machine(cfg, input_path(cfg, cfg.machine));
  Json vars = Json::array();
  for (const auto& v : m.variables)
    vars.push_back({{"name", v.name}, {"type", dsl::detail::type_to_string(v.type, m)}});
  Json evs = Json::array();
  for (const auto& e : m.events) {
    const char* st = e.status == dsl::Status::Ordinary      ? "ordinary"
                     : e.status == dsl::Status::Anticipated ? "anticipated"
                                                            : "convergent";
    evs.push_back({{"name", e.name},
                   {"status", st},
                   {"refines", e.refines ? Json(*e.refines) : Json(nullptr)}});
  }
  Json consts = Json::object();
  for (const auto& c : m.constants) consts[c.name] = c.value;
  o.result = {{"machine", m.name},
              {"refines", m.refines ? Json(*m.refines) : Json(nullptr)},
              {"constants", consts},
              {"variables", vars},
              {"events", evs},
              {"source", dsl::to_source(m)}};
  o.text = dsl::to_source(m);
  return o;
}

Outcome cmd_explore(const RunConfig& cfg) {
  Outcome o;
  if (cfg.machine.empty()) throw Usage("explore needs a machine file");
  auto m = load_machine(cfg, input_path(cfg, cfg.machine));
  try {
    auto g = sem::explore(m, limits(cfg));
    auto inv = sem::check_invariant(g);
    auto dl = sem::check_deadlock_free(g);
    o.result = report::graph_json(g);
    o.result["invariant"] = {{"holds", inv.holds}, {"message", inv.message}};
    o.result["deadlock_free"] = {
        {"holds", dl.holds},
        {"state", dl.state ? Json(g.state_text(*dl.state)) : Json(nullptr)},
        {"path", report::strings(dl.path)}};
    std::ostringstream t;
    t << m.name << ": " << g.states.size() << " states, " << g.edges.size() << " edges, "
      << g.deadlocks.size() << " deadlocks (limit " << g.limits.max_states << ")\n";
    t << "invariant: " << (inv.holds ? "holds" : "violated: " + inv.message) << "\n";
    t << "deadlock free: "
      << (dl.holds ? std::string("yes")
                   : "no, [" + g.state_text(*dl.state) + "] after " +
                         (dl.path.empty() ? std::string("<init>") : join(dl.path)))
      << "\n";
    if (cfg.edges) t << sem::to_edge_list(g);
    o.text = t.str();
    o.code = inv.holds ? kPass : kFail;
  } catch (const sem::ExplorationError& e) {
    o.code = kFail;
    o.result = {{"machine", m.name},
                {"error", e.what()},
                {"state", e.state()},
                {"path", report::strings(e.path())}};
    o.text = std::string(e.what()) + "\n";
  }
  return o;
}

std::string po_text(const refine::POReport& r) {
  std::ostringstream t;
  t << r.abstract_name << " -> " << r.concrete_name << " (" << r.pairs << " state pairs)\n";
  for (const auto& ob : r.obligations) {
    t << "  " << (ob.holds ? "ok  " : "FAIL") << " " << ob.name;
    if (!ob.holds) {
      t << ": " << ob.witness;
      if (!ob.path.empty()) t << " after " << join(ob.path);
    }
    t << "\n";
  }
  return t.str();
}

Outcome cmd_po(const RunConfig& cfg) {
  Outcome o;
  auto c = load_chain(cfg);
  std::vector<size_t> steps;
  if (cfg.step) {
    if (*cfg.step < 1 || *cfg.step > c.n())
      throw Usage("--step must lie in 1.." + std::to_string(c.n()));
    steps.push_back(*cfg.step);
  } else {
    for (size_t j = 1; j <= c.n(); ++j) steps.push_back(j);
  }
  Json reps = Json::array();
  bool ok = true;
  for (size_t j : steps) {
    auto r = refine::check_refinement_pair(c.machines[j - 1], c.machines[j], c.links[j - 1],
                                           limits(cfg));
    ok = ok && r.all_hold();
    Json x = report::po_json(r);
    x["step"] = j;
    x["renaming"] = report::renaming_json(c.links[j - 1].renaming);
    x["linking"] = c.links[j - 1].gluing_text;
    reps.push_back(x);
    o.text += po_text(r);
  }
  o.result = {{"chain", c.name}, {"steps", reps}};
  o.code = ok ? kPass : kFail;
  return o;
}

std::vector<std::string> machine_names(const refine::RefinementChain& c) {
  std::vector<std::string> out;
  for (const auto& m : c.machines) out.push_back(m.name);
  return out;
}

Outcome cmd_strategy(const RunConfig& cfg) {
  Outcome o;
  auto c = load_chain(cfg);
  auto r = refine::check_strategy(c);
  o.result = report::strategy_json(r, machine_names(c));
  o.result["chain"] = c.name;
  std::ostringstream t;
  for (size_t i = 0; i < r.labels.size(); ++i)
    t << c.machines[i].name << ": O=" << braces(r.labels[i].ordinary)
      << " A=" << braces(r.labels[i].anticipated) << " C=" << braces(r.labels[i].convergent)
      << "\n";
  for (const auto& f : r.findings) t << "rule " << f.rule << " violated: " << f.message << "\n";
  t << (r.holds() ? "strategy rules 1-6 hold\n" : "strategy rules violated\n");
  o.text = t.str();
  o.code = r.holds() ? kPass : kFail;
  return o;
}

Outcome cmd_ca(const RunConfig& cfg) {
  Outcome o;
  auto c = load_chain(cfg);
  auto gn = sem::explore(c.final_machine(), limits(cfg));
  auto r = refine::check_theorem1(c, gn, {}, limits(cfg));
  o.result = report::theorem1_json(r);
  o.result["chain"] = c.name;
  std::ostringstream t;
  t << "C* = " << braces(r.c_star) << "\nO* = " << braces(r.o_star) << "\n";
  t << "theorem hypotheses: strategy " << (r.strategy_ok ? "ok" : "fail") << ", POs "
    << (r.pos_ok ? "ok" : "fail") << "\n";
  t << "direct check on " << c.final_machine().name << ": "
    << (r.direct.holds ? "CA holds" : "CA fails, witness " + ltl::to_string(*r.direct.witness))
    << "\n";
  if (!r.consistent()) t << "INCONSISTENT: theorem asserts CA but the graph refutes it\n";
  o.text = t.str();
  o.code = r.holds() ? kPass : kFail;
  return o;
}

Outcome cmd_mc(const RunConfig& cfg) {
  Outcome o;
  std::optional<dsl::MachineAST> m;
  std::map<std::string, std::string> named;
  if (!cfg.machine.empty()) {
    auto path = input_path(cfg, cfg.machine);
    m = load_machine(cfg, path);
    named = sibling_properties(path);
  } else if (!cfg.chain.empty()) {
    auto c = load_chain(cfg);
    m = c.machines[cfg.at.empty() ? c.n() : level(c, cfg.at)];
    named = c.properties;
  } else {
    throw Usage("mc needs a machine file or --chain");
  }
  auto g = sem::explore(*m, limits(cfg));
  Json checks = Json::array();
  bool all = true;
  for (const auto& p : properties(cfg, named)) {
    auto v = ltl::model_check(g, p.formula);
    all = all && v.holds;
    Json x = report::verdict_json(v, p.formula);
    x["name"] = p.name;
    checks.push_back(x);
    o.text += m->name + " |= " + label(p) + ": " + (v.holds ? "holds" : "FAILS") + "\n";
    if (v.counterexample) o.text += "  counterexample " + ltl::to_string(*v.counterexample) + "\n";
    for (const auto& w : v.warnings) o.text += "  warning: " + w + "\n";
  }
  o.result = {{"machine", m->name},
              {"states", g.states.size()},
              {"max_states", g.limits.max_states},
              {"checks", checks}};
  o.code = all ? kPass : kFail;
  return o;
}

Outcome cmd_beta(const RunConfig& cfg) {
  Outcome o;
  EventSet sigma;
  std::map<std::string, std::string> named;
  if (!cfg.machine.empty()) {
    auto path = input_path(cfg, cfg.machine);
    sigma = refine::alphabet_of(load_machine(cfg, path));
    named = sibling_properties(path);
  } else if (!cfg.chain.empty()) {
    auto c = load_chain(cfg);
    sigma = refine::alphabet_of(c.machines[cfg.at.empty() ? c.n() : level(c, cfg.at)]);
    named = c.properties;
  }
  for (const auto& s : split(cfg.sigma, ',')) sigma.insert(s);
  auto p = single_property(cfg, named);
  EventSet beta;
  for (const auto& b : split(cfg.beta, ',')) beta.insert(b);
  if (beta.empty()) beta = alphabet(p.formula);
  for (const auto& a : alphabet(p.formula))
    if (!beta.count(a)) throw Usage("atom [" + a + "] of the property is not in --beta");
  sigma.insert(beta.begin(), beta.end());
  auto v = preserve::check_beta_dependent(p.formula, beta, sigma, beta_bounds(cfg));
  o.result = report::dependence_json(v);
  o.result["formula"] = to_string(p.formula);
  o.result["beta"] = report::strings(beta);
  o.result["sigma"] = report::strings(sigma);
  o.text = label(p) + "\nbeta = " + braces(beta) + ", sigma = " + braces(sigma) + "\n" +
           preserve::to_string(v.status) + " (" + v.method + ")";
  if (v.witness) {
    o.text += ": u = " + ltl::to_string(*v.witness) +
              ", u projected = " + ltl::to_string(ltl::project_trace(*v.witness, beta));
  } else if (v.status == preserve::DependenceVerdict::Status::Unknown) {
    o.text += ": no witness up to prefix " + std::to_string(v.bounds.prefix) + ", cycle " +
              std::to_string(v.bounds.cycle);
  }
  o.text += "\n";
  using S = preserve::DependenceVerdict::Status;
  o.code = v.status == S::Certified ? kPass : v.status == S::Refuted ? kFail : kBound;
  return o;
}

Outcome cmd_translate(const RunConfig& cfg) {
  Outcome o;
  auto c = load_chain(cfg);
  size_t i = cfg.at.empty() ? 0 : level(c, cfg.at);
  auto p = single_property(cfg, c.properties);
  auto g = refine::compose_renamings(c, i + 1);
  Formula t = preserve::translate_formula(p.formula, g);
  o.result = {{"chain", c.name},
              {"from", c.machines[i].name},
              {"to", c.final_machine().name},
              {"formula", to_string(p.formula)},
              {"renaming", report::renaming_json(g)},
              {"translation", to_string(t)}};
  o.text = to_string(t) + "\n";
  return o;
}

std::string certificate_text(const preserve::Certificate& c) {
  std::ostringstream t;
  t << "Lemma " << c.lemma << " on chain " << c.chain << " (" << join(c.machines) << "), level "
    << c.level << " (" << c.machines[c.level] << "), max states " << c.max_states << "\n";
  if (c.property) t << "property: " << to_string(*c.property) << "\n";
  if (!c.beta.empty()) t << "beta: " << braces(c.beta) << "\n";
  for (const auto& h : c.hypotheses)
    t << "  " << (h.holds ? "ok  " : "FAIL") << " " << h.name << ": " << h.evidence << "\n";
  t << (c.asserted ? "ASSERTED " : "BLOCKED  ") << c.machines.back()
    << " |= " << to_string(c.conclusion) << "\n";
  if (!c.asserted) t << "failed hypotheses: " << join(c.failed(), "; ") << "\n";
  if (c.cross.ran) {
    t << "cross-validation: " << (c.cross.holds ? "holds" : "fails");
    if (c.cross.counterexample) t << ", counterexample " << ltl::to_string(*c.cross.counterexample);
    t << "\n";
  }
  if (!c.consistent()) t << "INCONSISTENT: asserted conclusion refuted on the final machine\n";
  return t.str();
}

int certificate_code(const preserve::Certificate& c) {
  if (!c.consistent()) return kFail;
  return c.asserted ? kPass : kBlocked;
}

Outcome cmd_gf(const RunConfig& cfg) {
  Outcome o;
  auto c = load_chain(cfg);
  preserve::ChainContext ctx(c, limits(cfg));
  preserve::LemmaOptions opt;
  opt.cross_validate = !cfg.no_cross;
  auto cert = preserve::apply_lemma_gf(ctx, opt);
  o.result = report::certificate_json(cert);
  o.text = certificate_text(cert);
  o.code = certificate_code(cert);
  return o;
}

Outcome cmd_preserve(const RunConfig& cfg) {
  Outcome o;
  auto c = load_chain(cfg);
  size_t i = level(c, cfg.at);
  auto p = single_property(cfg, c.properties);
  EventSet beta;
  for (const auto& b : split(cfg.beta, ',')) beta.insert(b);
  preserve::ChainContext ctx(c, limits(cfg));
  preserve::LemmaOptions opt;
  opt.cross_validate = !cfg.no_cross;
  opt.accept_unknown_dependence = cfg.accept_unknown;
  opt.bounds = beta_bounds(cfg);
  preserve::Certificate cert;
  try {
    cert = preserve::apply_preservation(ctx, i, p.formula, beta, opt);
  } catch (const LimitError&) {
    throw;
  } catch (const sem::ExplorationError&) {
    throw;
  } catch (const Error& e) {
    throw Usage(e.what());
  }
  o.result = report::certificate_json(cert);
  o.result["property_name"] = p.name;
  o.text = certificate_text(cert);
  o.code = certificate_code(cert);
  return o;
}

Outcome cmd_oracle(const RunConfig& cfg) {
  Outcome o;
  auto root = corpus_root(cfg);
  if (!fs::exists(root)) throw Usage("corpus root not found: " + root.string());
  oracle::DiffOptions opt;
  opt.random_pairs = cfg.random_pairs;
  opt.seed = cfg.seed;
  auto r = oracle::cross_validate(oracle::load_corpus(root), opt);
  o.result = report::diff_json(r);
  std::ostringstream t;
  for (const auto& x : r.rows)
    t << x.entry << "/" << x.machine << " " << x.property << ": checker "
      << (x.checker ? "holds" : "fails") << ", oracle " << (x.oracle ? "holds" : "fails")
      << (x.expected ? std::string(", expected ") + (*x.expected ? "holds" : "fails") : "")
      << (x.agree() && x.as_expected() ? "" : "  MISMATCH") << "\n";
  t << r.random_pairs << " random pairs, " << r.random_disagreements << " disagreements\n";
  for (const auto& f : r.failures) t << "failure: " << f << "\n";
  o.text = t.str();
  o.code = r.ok() ? kPass : kFail;
  return o;
}

void emit(const RunConfig& cfg, const Outcome& o) {
  if (cfg.json)
    std::cout << report::dump(report::envelope(cfg.command, outcome_name(o.code), o.result));
  else if (!cfg.quiet)
    std::cout << o.text;
}

int fail_with(const RunConfig& cfg, int code, const std::string& message) {
  if (cfg.json)
    std::cout << report::dump(
        report::envelope(cfg.command, outcome_name(code), Json{{"message", message}}));
  std::cerr << "ebltl: " << message << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"Event-B refinement chains and event-based LTL"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "ebltl 0.1.0");

  auto common = [&](CLI::App* s) {
    s->add_flag("--json", cfg.json, "Print a JSON report");
    s->add_flag("-q,--quiet", cfg.quiet, "No text output; exit code only");
    s->add_option("--bound-states", cfg.bound_states, "State limit for explorations")
        ->capture_default_str();
    s->add_option("--const", cfg.consts, "Constant override name=value (repeatable)");
    s->add_option("--corpus", cfg.corpus, "Corpus root (default: $EBLTL_CORPUS or ./corpus)");
  };
  auto chain_opt = [&](CLI::App* s, bool required) {
    auto* o = s->add_option("--chain", cfg.chain, "Chain manifest (JSON)");
    if (required) o->required();
  };
  auto prop_opt = [&](CLI::App* s, bool required) {
    auto* o = s->add_option("--prop", cfg.prop, "Formula, @file, or a named property");
    if (required) o->required();
  };
  auto at_opt = [&](CLI::App* s, bool required) {
    auto* o = s->add_option("--at", cfg.at, "Machine of the chain: 1-based position or name");
    if (required) o->required();
  };
  auto lasso_opts = [&](CLI::App* s) {
    s->add_option("--lasso-prefix", cfg.lasso_prefix, "Prefix bound of the dependence search")
        ->capture_default_str();
    s->add_option("--lasso-cycle", cfg.lasso_cycle, "Cycle bound of the dependence search")
        ->capture_default_str();
  };

  std::map<std::string, Outcome (*)(const RunConfig&)> run;

  auto* parse = app.add_subcommand("parse", "Parse and typecheck a machine, or a formula");
  parse->add_option("machine", cfg.machine, "Machine file (.eb)");
  prop_opt(parse, false);
  common(parse);
  run["parse"] = cmd_parse;

  auto* explore = app.add_subcommand("explore", "Explore the reachable state graph");
  explore->add_option("machine", cfg.machine, "Machine file (.eb)")->required();
  explore->add_flag("--edges", cfg.edges, "Also print the edge list");
  common(explore);
  run["explore"] = cmd_explore;

  auto* po = app.add_subcommand("po", "Refinement proof obligations for each chain step");
  chain_opt(po, true);
  po->add_option("--step", cfg.step, "Only step j (M_{j-1} to M_j)");
  common(po);
  run["po"] = cmd_po;

  auto* strategy = app.add_subcommand("strategy", "Development strategy rules and labels");
  chain_opt(strategy, true);
  common(strategy);
  run["strategy"] = cmd_strategy;

  auto* ca = app.add_subcommand("ca", "Divergence freedom of the final machine (Theorem 1)");
  chain_opt(ca, true);
  common(ca);
  run["ca"] = cmd_ca;

  auto* mc = app.add_subcommand("mc", "Model check formulas on a machine");
  mc->add_option("machine", cfg.machine, "Machine file (.eb)");
  chain_opt(mc, false);
  at_opt(mc, false);
  prop_opt(mc, true);
  common(mc);
  run["mc"] = cmd_mc;

  auto* beta = app.add_subcommand("beta", "Check beta-dependence of a formula");
  beta->add_option("machine", cfg.machine, "Machine whose alphabet is the ambient alphabet");
  chain_opt(beta, false);
  at_opt(beta, false);
  prop_opt(beta, true);
  beta->add_option("--beta", cfg.beta, "Comma-separated events (default: alphabet of --prop)");
  beta->add_option("--sigma", cfg.sigma, "Extra ambient events, comma-separated");
  lasso_opts(beta);
  common(beta);
  run["beta"] = cmd_beta;

  auto* translate = app.add_subcommand("translate", "Translate a formula to the final machine");
  chain_opt(translate, true);
  at_opt(translate, false);
  prop_opt(translate, true);
  common(translate);
  run["translate"] = cmd_translate;

  auto* gf = app.add_subcommand("gf", "Lemma 1/3: the final machine keeps doing initial events");
  chain_opt(gf, true);
  gf->add_flag("--no-cross", cfg.no_cross, "Skip cross-validation on the final machine");
  common(gf);
  run["gf"] = cmd_gf;

  auto* pres = app.add_subcommand("preserve", "Lemma 2/4: carry a property to the final machine");
  chain_opt(pres, true);
  at_opt(pres, true);
  prop_opt(pres, true);
  pres->add_option("--beta", cfg.beta, "Comma-separated events (default: alphabet of --prop)");
  pres->add_flag("--accept-unknown", cfg.accept_unknown,
                 "Accept dependence that is unrefuted at the bounds");
  pres->add_flag("--no-cross", cfg.no_cross, "Skip cross-validation on the final machine");
  lasso_opts(pres);
  common(pres);
  run["preserve"] = cmd_preserve;

  auto* orc = app.add_subcommand("oracle", "Differential run of checker against oracle");
  orc->add_option("--random", cfg.random_pairs, "Random graph/formula pairs")
      ->capture_default_str();
  orc->add_option("--seed", cfg.seed, "Seed for the random pairs")->capture_default_str();
  common(orc);
  run["oracle"] = cmd_oracle;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }
  for (auto* s : app.get_subcommands()) cfg.command = s->get_name();

  try {
    Outcome o = run.at(cfg.command)(cfg);
    emit(cfg, o);
    return o.code;
  } catch (const Usage& e) {
    return fail_with(cfg, kUsage, e.what());
  } catch (const ParseError& e) {
    return fail_with(cfg, kUsage, e.what());
  } catch (const LimitError& e) {
    return fail_with(cfg, kBound, e.what());
  } catch (const sem::ExplorationError& e) {
    std::string path = e.path().empty() ? "<init>" : join(e.path());
    return fail_with(cfg, kFail, std::string(e.what()) + " (after " + path + ")");
  } catch (const Error& e) {
    return fail_with(cfg, kUsage, e.what());
  }
}
