#pragma once

#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "ebltl/error.hpp"
#include "ebltl/formula.hpp"

namespace ebltl::ltl {

/// A maximal execution as an event sequence: either finite (ending in a
/// deadlock) or a lasso `prefix (cycle)^ω` with a nonempty cycle.
struct Trace {
  enum class Kind { Finite, Lasso };
  Kind kind = Kind::Finite;
  std::vector<std::string> prefix;
  std::vector<std::string> cycle;

  static Trace finite(std::vector<std::string> events) {
    return {Kind::Finite, std::move(events), {}};
  }
  static Trace lasso(std::vector<std::string> prefix, std::vector<std::string> cycle) {
    if (cycle.empty()) throw Error("a lasso trace needs a nonempty cycle");
    return {Kind::Lasso, std::move(prefix), std::move(cycle)};
  }

  bool is_lasso() const { return kind == Kind::Lasso; }

  /// Number of distinct suffixes: positions of the finite word plus the empty
  /// suffix, or prefix plus cycle positions.
  size_t positions() const {
    return is_lasso() ? prefix.size() + cycle.size() : prefix.size() + 1;
  }

  friend bool operator==(const Trace& a, const Trace& b) {
    return a.kind == b.kind && a.prefix == b.prefix && a.cycle == b.cycle;
  }
};

/// Whether two traces denote the same (finite or infinite) event word.
inline bool same_word(const Trace& a, const Trace& b) {
  if (a.kind != b.kind) return false;
  if (!a.is_lasso()) return a.prefix == b.prefix;
  size_t l = std::lcm(a.cycle.size(), b.cycle.size());
  size_t n = std::max(a.prefix.size(), b.prefix.size()) + l;
  auto at = [](const Trace& t, size_t i) -> const std::string& {
    if (i < t.prefix.size()) return t.prefix[i];
    return t.cycle[(i - t.prefix.size()) % t.cycle.size()];
  };
  for (size_t i = 0; i < n; ++i)
    if (at(a, i) != at(b, i)) return false;
  return true;
}

/// Restriction of a trace to the events in `keep`. A lasso whose cycle
/// filters to nothing becomes the finite filtered prefix.
inline Trace project_trace(const Trace& u, const EventSet& keep) {
  auto filter = [&](const std::vector<std::string>& v) {
    std::vector<std::string> out;
    for (const auto& e : v)
      if (keep.count(e)) out.push_back(e);
    return out;
  };
  Trace r;
  r.prefix = filter(u.prefix);
  if (u.is_lasso()) {
    r.cycle = filter(u.cycle);
    r.kind = r.cycle.empty() ? Trace::Kind::Finite : Trace::Kind::Lasso;
  }
  return r;
}

/// Events occurring in the trace.
inline EventSet events_of(const Trace& u) {
  EventSet s(u.prefix.begin(), u.prefix.end());
  s.insert(u.cycle.begin(), u.cycle.end());
  return s;
}

/// `a, b | (c, d)^ω` for lassos and `a, b | deadlock` for finite traces.
inline std::string to_string(const Trace& u) {
  std::ostringstream os;
  for (size_t i = 0; i < u.prefix.size(); ++i) os << (i ? ", " : "") << u.prefix[i];
  if (u.is_lasso()) {
    os << (u.prefix.empty() ? "| (" : " | (");
    for (size_t i = 0; i < u.cycle.size(); ++i) os << (i ? ", " : "") << u.cycle[i];
    os << ")^ω";
  } else {
    os << (u.prefix.empty() ? "| deadlock" : " | deadlock");
  }
  return os.str();
}

}  // namespace ebltl::ltl
