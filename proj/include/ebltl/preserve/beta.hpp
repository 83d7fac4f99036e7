#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ebltl/error.hpp"
#include "ebltl/formula.hpp"
#include "ebltl/ltl/evaluate.hpp"
#include "ebltl/ltl/trace.hpp"

namespace ebltl::preserve {

struct BetaBounds {
  size_t prefix = 4;
  size_t cycle = 4;
};

struct DependenceVerdict {
  enum class Status { Certified, Refuted, Unknown };
  Status status = Status::Unknown;
  std::string method;  // "syntactic-schema" or "bounded-semantic"
  std::optional<ltl::Trace> witness;
  BetaBounds bounds;
  size_t traces_checked = 0;
};

inline const char* to_string(DependenceVerdict::Status s) {
  switch (s) {
    case DependenceVerdict::Status::Certified:
      return "certified";
    case DependenceVerdict::Status::Refuted:
      return "refuted";
    case DependenceVerdict::Status::Unknown:
      return "unknown";
  }
  return "?";
}

namespace detail {

/// A disjunction of atoms, including the empty one (`!true`).
inline bool letter_predicate(const Formula& f) {
  using K = Formula::Kind;
  if (f.kind() == K::Atom) return true;
  if (f.kind() == K::Or) return letter_predicate(f.lhs()) && letter_predicate(f.rhs());
  return f.kind() == K::Not && f.operand().kind() == K::True;
}

/// GF D, FG !D, G(D => F D'), F D, and boolean combinations of them.
inline bool projection_schema(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::True:
      return true;
    case K::Not:
      return projection_schema(f.operand());
    case K::And:
    case K::Or:
      if (projection_schema(f.lhs()) && projection_schema(f.rhs())) return true;
      break;
    default:
      break;
  }
  if (f.kind() == K::Finally) {
    const Formula& g = f.operand();
    if (letter_predicate(g)) return true;
    if (g.kind() == K::Globally && g.operand().kind() == K::Not &&
        letter_predicate(g.operand().operand()))
      return true;
  }
  if (f.kind() == K::Globally) {
    const Formula& g = f.operand();
    if (g.kind() == K::Finally && letter_predicate(g.operand())) return true;
    if (g.kind() == K::Or && g.lhs().kind() == K::Not && letter_predicate(g.lhs().operand()) &&
        g.rhs().kind() == K::Finally && letter_predicate(g.rhs().operand()))
      return true;
  }
  return false;
}

/// u is a lasso not expressible with a shorter prefix or cycle.
inline bool canonical_lasso(const std::vector<size_t>& p, const std::vector<size_t>& c) {
  if (!p.empty() && p.back() == c.back()) return false;
  for (size_t d = 1; d < c.size(); ++d) {
    if (c.size() % d) continue;
    bool power = true;
    for (size_t i = d; i < c.size() && power; ++i) power = c[i] == c[i - d];
    if (power) return false;
  }
  return true;
}

}  // namespace detail

/// Searches finite traces and lassos over `sigma` up to the bounds for a u
/// with u |= φ differing from (u projected on β) |= φ. Refuted with a
/// witness, or unknown.
///
/// Events that φ does not mention are interchangeable, so the search uses
/// one representative from β and one from outside β.
inline DependenceVerdict search_projection_witness(const Formula& phi, const EventSet& beta,
                                                   const EventSet& sigma, BetaBounds bounds = {}) {
  EventSet atoms = alphabet(phi);
  DependenceVerdict v;
  v.bounds = bounds;
  v.method = "bounded-semantic";

  std::vector<std::string> letters(atoms.begin(), atoms.end());
  EventSet all = sigma;
  all.insert(beta.begin(), beta.end());
  for (const auto& e : all)
    if (!atoms.count(e) && beta.count(e)) {
      letters.push_back(e);
      break;
    }
  for (const auto& e : all)
    if (!beta.count(e)) {
      letters.push_back(e);
      break;
    }
  const size_t k = letters.size();
  auto word = [&](const std::vector<size_t>& w) {
    std::vector<std::string> out;
    for (size_t i : w) out.push_back(letters[i]);
    return out;
  };
  auto differs = [&](const ltl::Trace& u) {
    ++v.traces_checked;
    return ltl::holds_on_trace(u, phi) != ltl::holds_on_trace(ltl::project_trace(u, beta), phi);
  };
  // All words of length n over k letters, in lexicographic order.
  auto words = [&](size_t n, const std::function<bool(const std::vector<size_t>&)>& f) {
    std::vector<size_t> w(n, 0);
    while (true) {
      if (f(w)) return true;
      size_t i = n;
      while (i > 0 && w[i - 1] + 1 == k) w[--i] = 0;
      if (i == 0) return false;
      ++w[i - 1];
    }
  };

  for (size_t len = 0; len <= bounds.prefix + bounds.cycle; ++len) {
    bool found = words(len, [&](const std::vector<size_t>& w) {
      ltl::Trace u = ltl::Trace::finite(word(w));
      if (!differs(u)) return false;
      v.witness = u;
      return true;
    });
    if (!found && k > 0) {
      for (size_t c = 1; c <= std::min(len, bounds.cycle) && !found; ++c) {
        size_t p = len - c;
        if (p > bounds.prefix) continue;
        found = words(p, [&](const std::vector<size_t>& pw) {
          return words(c, [&](const std::vector<size_t>& cw) {
            if (!detail::canonical_lasso(pw, cw)) return false;
            ltl::Trace u = ltl::Trace::lasso(word(pw), word(cw));
            if (!differs(u)) return false;
            v.witness = u;
            return true;
          });
        });
      }
    }
    if (found) {
      v.status = DependenceVerdict::Status::Refuted;
      return v;
    }
  }
  v.status = DependenceVerdict::Status::Unknown;
  return v;
}

/// Whether φ's truth survives projection onto β. Schema shapes are
/// certified outright; otherwise the bounded search decides between
/// refuted and unknown.
inline DependenceVerdict check_beta_dependent(const Formula& phi, const EventSet& beta,
                                              const EventSet& sigma, BetaBounds bounds = {}) {
  for (const auto& a : alphabet(phi))
    if (!beta.count(a)) throw Error("atom [" + a + "] of the formula is not in beta");
  if (detail::projection_schema(phi)) {
    DependenceVerdict v;
    v.bounds = bounds;
    v.status = DependenceVerdict::Status::Certified;
    v.method = "syntactic-schema";
    return v;
  }
  return search_projection_witness(phi, beta, sigma, bounds);
}

}  // namespace ebltl::preserve
