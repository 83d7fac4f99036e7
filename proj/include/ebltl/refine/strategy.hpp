#pragma once

#include <set>
#include <string>
#include <vector>

#include "ebltl/error.hpp"
#include "ebltl/refine/chain.hpp"

namespace ebltl::refine {

struct StrategyFinding {
  int rule = 0;          // 1..6
  size_t level = 0;      // machine index in the chain
  std::string machine;
  std::string event;
  std::string message;
};

struct StrategyReport {
  std::vector<StrategyFinding> findings;
  std::vector<LabelSets> labels;  // per machine

  bool holds() const { return findings.empty(); }
  std::set<int> violated_rules() const {
    std::set<int> r;
    for (const auto& f : findings) r.insert(f.rule);
    return r;
  }
};

/// Checks the six development-strategy restrictions on a chain and reports
/// every violation.
inline StrategyReport check_strategy(const RefinementChain& chain) {
  StrategyReport rep;
  for (const auto& m : chain.machines) rep.labels.push_back(labels_of(m));
  auto add = [&](int rule, size_t level, const std::string& ev, std::string msg) {
    rep.findings.push_back({rule, level, chain.machines[level].name, ev, std::move(msg)});
  };

  const auto& m0 = chain.machines.front();
  for (const auto& e : m0.events)
    if (e.status != dsl::Status::Ordinary)
      add(1, 0, e.name,
          "event " + e.name + " of the initial machine " + m0.name + " is " +
              dsl::to_string(e.status) + ", not ordinary");

  for (size_t i = 1; i < chain.machines.size(); ++i) {
    const auto& abs = chain.machines[i - 1];
    const auto& con = chain.machines[i];
    const auto& f = chain.f(i);
    auto range = f.range();
    for (const auto& x : abs.events)
      if (!range.count(x.name))
        add(2, i, x.name,
            "abstract event " + x.name + " of " + abs.name + " has no refining event in " +
                con.name);
    for (const auto& e : con.events) {
      auto img = f.apply(e.name);
      if (!img) {
        if (e.status == dsl::Status::Ordinary)
          add(3, i, e.name, "new event " + e.name + " of " + con.name + " is ordinary");
        continue;
      }
      const auto& x = abs.events[abs.event_index(*img)];
      if (x.status == dsl::Status::Anticipated) {
        if (e.status == dsl::Status::Ordinary)
          add(4, i, e.name,
              e.name + " refines anticipated " + x.name + " but is ordinary");
      } else if (e.status != dsl::Status::Ordinary) {
        add(5, i, e.name,
            e.name + " refines " + dsl::to_string(x.status) + " " + x.name + " but is " +
                dsl::to_string(e.status));
      }
    }
  }

  const auto& last = chain.final_machine();
  for (const auto& e : last.events)
    if (e.status == dsl::Status::Anticipated)
      add(6, chain.n(), e.name,
          "event " + e.name + " is still anticipated in the final machine " + last.name);
  return rep;
}

/// g_{i,j} = f_j ; f_{j-1} ; ... ; f_i, a partial map from the alphabet of
/// M_j to that of M_{i-1}. i = j + 1 gives the identity on M_j.
inline RenamingMap compose_renamings(const RefinementChain& chain, size_t i, size_t j) {
  if (j > chain.n() || i < 1 || i > j + 1)
    throw Error("g_{" + std::to_string(i) + "," + std::to_string(j) +
                "} is undefined for a chain of length " + std::to_string(chain.n()));
  RenamingMap g = RenamingMap::identity(alphabet_of(chain.machines[j]));
  for (size_t k = j; k >= i; --k) g = then(g, chain.f(k));
  return g;
}

/// g_{i,n} for 1 <= i <= n + 1.
inline RenamingMap compose_renamings(const RefinementChain& chain, size_t i) {
  return compose_renamings(chain, i, chain.n());
}

}  // namespace ebltl::refine
