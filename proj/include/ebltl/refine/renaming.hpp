#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ebltl/error.hpp"
#include "ebltl/formula.hpp"

namespace ebltl::refine {

/// Partial map from concrete events to the abstract events they refine.
/// Events of the concrete alphabet outside the domain are new events.
struct RenamingMap {
  std::map<std::string, std::string> forward;
  EventSet concrete_alphabet;
  EventSet abstract_alphabet;

  static RenamingMap identity(const EventSet& alphabet) {
    RenamingMap r;
    for (const auto& e : alphabet) r.forward[e] = e;
    r.concrete_alphabet = alphabet;
    r.abstract_alphabet = alphabet;
    return r;
  }

  bool defined(const std::string& e) const { return forward.count(e) != 0; }

  std::optional<std::string> apply(const std::string& e) const {
    auto it = forward.find(e);
    if (it == forward.end()) return std::nullopt;
    return it->second;
  }

  EventSet domain() const {
    EventSet s;
    for (const auto& [k, _] : forward) s.insert(k);
    return s;
  }

  EventSet range() const {
    EventSet s;
    for (const auto& [_, v] : forward) s.insert(v);
    return s;
  }

  /// Concrete events mapped to x, sorted.
  std::vector<std::string> preimage(const std::string& x) const {
    std::vector<std::string> out;
    for (const auto& [k, v] : forward)
      if (v == x) out.push_back(k);
    return out;
  }

  EventSet preimage(const EventSet& xs) const {
    EventSet out;
    for (const auto& [k, v] : forward)
      if (xs.count(v)) out.insert(k);
    return out;
  }

  EventSet new_events() const {
    EventSet out;
    for (const auto& e : concrete_alphabet)
      if (!defined(e)) out.insert(e);
    return out;
  }

  bool is_identity() const {
    for (const auto& [k, v] : forward)
      if (k != v) return false;
    return true;
  }

  friend bool operator==(const RenamingMap& a, const RenamingMap& b) {
    return a.forward == b.forward && a.concrete_alphabet == b.concrete_alphabet &&
           a.abstract_alphabet == b.abstract_alphabet;
  }
};

/// `outer ; inner`: apply outer first, then inner. Undefined wherever either
/// stage is.
inline RenamingMap then(const RenamingMap& outer, const RenamingMap& inner) {
  RenamingMap r;
  r.concrete_alphabet = outer.concrete_alphabet;
  r.abstract_alphabet = inner.abstract_alphabet;
  for (const auto& [k, v] : outer.forward)
    if (auto w = inner.apply(v)) r.forward[k] = *w;
  return r;
}

}  // namespace ebltl::refine
