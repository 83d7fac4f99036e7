#pragma once

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "ebltl/dsl/machine.hpp"
#include "ebltl/error.hpp"
#include "ebltl/formula.hpp"
#include "ebltl/ltl/evaluate.hpp"
#include "ebltl/ltl/model_check.hpp"
#include "ebltl/oracle/oracle.hpp"
#include "ebltl/oracle/random.hpp"
#include "ebltl/sem/explore.hpp"

namespace ebltl::oracle {

struct ExpectedVerdict {
  std::string machine;
  std::string property;
  bool holds = false;
  std::string source;
};

/// One corpus directory: machines, named properties, chain manifests and
/// the expected verdict table from its expected.json.
struct CorpusEntry {
  std::string name;
  std::filesystem::path dir;
  std::map<std::string, std::string> machines;    // machine name -> file
  std::map<std::string, std::string> properties;  // property name -> formula text
  std::map<std::string, std::string> chains;      // chain key -> manifest file
  dsl::ConstantOverrides constants;
  std::vector<ExpectedVerdict> verdicts;
  nlohmann::json raw;

  dsl::MachineAST load(const std::string& machine) const {
    auto path = dir / machines.at(machine);
    dsl::ConstantOverrides mine;
    for (const auto& c : dsl::load_machine(path).constants)
      if (constants.count(c.name)) mine[c.name] = constants.at(c.name);
    return dsl::load_machine(path, mine);
  }
};

/// EBLTL_CORPUS if set, else the given fallback.
inline std::filesystem::path corpus_root(const std::filesystem::path& fallback = "corpus") {
  if (const char* env = std::getenv("EBLTL_CORPUS"); env && *env) return env;
  return fallback;
}

inline CorpusEntry load_corpus_entry(const std::filesystem::path& dir) {
  CorpusEntry e;
  e.dir = dir;
  auto file = dir / "expected.json";
  try {
    e.raw = nlohmann::json::parse(dsl::read_text_file(file));
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(file.string() + ": " + ex.what(), 0, 0);
  }
  e.name = e.raw.value("name", dir.filename().string());
  e.machines = e.raw.at("machines").get<std::map<std::string, std::string>>();
  e.properties = e.raw.value("properties", std::map<std::string, std::string>{});
  if (e.raw.contains("chains")) e.chains = e.raw["chains"].get<std::map<std::string, std::string>>();
  if (e.raw.contains("constants"))
    for (auto& [k, v] : e.raw["constants"].items()) e.constants[k] = v.get<std::int64_t>();
  if (e.raw.contains("verdicts"))
    for (auto& [m, row] : e.raw["verdicts"].items())
      for (auto& [p, cell] : row.items())
        e.verdicts.push_back({m, p, cell.at("holds").get<bool>(), cell.value("source", "")});
  return e;
}

/// Every subdirectory of `root` holding an expected.json, by name.
inline std::vector<CorpusEntry> load_corpus(const std::filesystem::path& root) {
  std::vector<std::filesystem::path> dirs;
  for (const auto& d : std::filesystem::directory_iterator(root))
    if (d.is_directory() && std::filesystem::exists(d.path() / "expected.json"))
      dirs.push_back(d.path());
  std::sort(dirs.begin(), dirs.end());
  std::vector<CorpusEntry> out;
  for (const auto& d : dirs) out.push_back(load_corpus_entry(d));
  return out;
}

/// Whether u is a maximal execution of g: finite words must end in a
/// deadlock, infinite words must be readable forever.
inline bool is_trace_of(const sem::StateGraph& g, const ltl::Trace& u) {
  auto read = [&](std::set<size_t> from, const std::vector<std::string>& w) {
    for (const auto& x : w) {
      std::set<size_t> next;
      for (size_t s : from)
        for (size_t e : g.out[s])
          if (g.edges[e].event == x) next.insert(g.edges[e].target);
      from = std::move(next);
    }
    return from;
  };
  auto cur = read({g.initial.begin(), g.initial.end()}, u.prefix);
  if (!u.is_lasso()) {
    for (size_t s : cur)
      if (g.out[s].empty()) return true;
    return false;
  }
  // The sets after each further cycle repeat eventually; the word is a
  // trace iff none of them is empty.
  std::vector<std::set<size_t>> seen;
  while (!cur.empty()) {
    if (std::find(seen.begin(), seen.end(), cur) != seen.end()) return true;
    seen.push_back(cur);
    cur = read(cur, u.cycle);
  }
  return false;
}

struct DiffRow {
  std::string entry;
  std::string machine;
  std::string property;
  std::optional<bool> expected;
  std::string source;
  bool checker = false;
  bool oracle = false;
  std::string oracle_method;
  std::optional<ltl::Trace> counterexample;  // from the checker
  bool counterexample_ok = true;  // refutes φ and is a trace of the machine
  bool agree() const { return checker == oracle && counterexample_ok; }
  bool as_expected() const { return !expected || *expected == checker; }
};

struct DiffReport {
  std::vector<DiffRow> rows;
  size_t random_pairs = 0;
  size_t random_disagreements = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

struct DiffOptions {
  size_t random_pairs = 500;
  unsigned seed = 1;
  size_t random_max_states = 50;
  int random_depth = 5;
  OracleBounds bounds;
};

namespace detail {

inline DiffRow compare(const sem::StateGraph& g, const Formula& phi, const OracleBounds& b) {
  DiffRow r;
  auto v = ltl::model_check(g, phi);
  auto o = oracle_model_check(g, phi, b);
  r.checker = v.holds;
  r.oracle = o.holds;
  r.oracle_method = o.method;
  r.counterexample = v.counterexample;
  if (v.counterexample)
    r.counterexample_ok =
        !ltl::holds_on_trace(*v.counterexample, phi) && is_trace_of(g, *v.counterexample);
  return r;
}

}  // namespace detail

/// Checker against oracle on every machine/property cell of the corpus
/// tables, then on seeded random graph/formula pairs.
inline DiffReport cross_validate(const std::vector<CorpusEntry>& entries,
                                 const DiffOptions& opt = {}) {
  DiffReport rep;
  for (const auto& e : entries) {
    std::map<std::string, sem::StateGraph> graphs;
    for (const auto& [m, file] : e.machines) graphs.emplace(m, sem::explore(e.load(m)));
    for (const auto& [m, g] : graphs) {
      for (const auto& [p, text] : e.properties) {
        Formula phi = parse_formula(text);
        // Only properties over the machine's own events.
        bool own = true;
        for (const auto& a : alphabet(phi))
          own = own && std::find(g.alphabet.begin(), g.alphabet.end(), a) != g.alphabet.end();
        if (!own) continue;
        DiffRow r = detail::compare(g, phi, opt.bounds);
        r.entry = e.name;
        r.machine = m;
        r.property = p;
        for (const auto& x : e.verdicts)
          if (x.machine == m && x.property == p) {
            r.expected = x.holds;
            r.source = x.source;
          }
        std::string where = e.name + "/" + m + "/" + p;
        if (!r.agree()) rep.failures.push_back(where + ": checker and oracle disagree");
        if (!r.as_expected()) rep.failures.push_back(where + ": verdict differs from the table");
        rep.rows.push_back(std::move(r));
      }
    }
  }
  std::mt19937 rng(opt.seed);
  const std::vector<std::string> letters{"a", "b", "c", "d"};
  for (size_t i = 0; i < opt.random_pairs; ++i) {
    sem::StateGraph g = random_graph(rng, letters, opt.random_max_states);
    Formula phi = random_formula(rng, letters, opt.random_depth);
    DiffRow r = detail::compare(g, phi, opt.bounds);
    ++rep.random_pairs;
    if (!r.agree()) {
      ++rep.random_disagreements;
      rep.failures.push_back("random pair " + std::to_string(i) + ": " + to_string(phi));
    }
  }
  return rep;
}

}  // namespace ebltl::oracle
